#include "crlink/region_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace crlink {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Quantile level of the first interior ray. The first sector is the
// heavy-tailed guard band that the optimizer keeps silent, so it gets a
// small fixed share of the probability mass; the remaining rays split
// the rest evenly.
constexpr double kFirstRayQuantile = 0.05;

std::vector<double> design_thresholds(const AmcTable& table, double target) {
    std::vector<double> g(table.size(), 0.0);
    for (int n = 1; n <= table.top_mode(); ++n)
        g[static_cast<std::size_t>(n)] = snir_threshold(table.mode(n), target);
    return g;
}

std::vector<double> distinct_products(std::span<const double> g1, std::span<const double> g2) {
    std::vector<double> zs;
    zs.reserve((g1.size() - 1) * (g2.size() - 1));
    for (std::size_t n = 1; n < g1.size(); ++n)
        for (std::size_t m = 1; m < g2.size(); ++m) zs.push_back(g1[n] * g2[m]);
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
    return zs;
}

}  // namespace

RegionGrid::RegionGrid(AmcTable table, BerTargets targets)
    : table_(std::move(table)), targets_(targets) {
    targets_.validate();
    g1_ = design_thresholds(table_, targets_.design_primary());
    g2_ = design_thresholds(table_, targets_.design_cognitive());
}

int RegionGrid::locate(const ScaledSnir& point) const {
    if (!(point.alpha > 0.0) || !(point.beta > 0.0))
        throw std::invalid_argument("locate: scaled SNIRs must be positive");
    const double prod = point.alpha * point.beta;
    const double slope = point.beta / point.alpha;
    const auto band =
        std::upper_bound(product_bounds.begin(), product_bounds.end(), prod) - product_bounds.begin();
    const auto sector = std::upper_bound(ray_bounds.begin(), ray_bounds.end(), slope) - ray_bounds.begin();
    return static_cast<int>(band) * rays + static_cast<int>(sector) + 1;
}

int count_common_rate_bands(const AmcTable& table, const BerTargets& targets) {
    const auto g1 = design_thresholds(table, targets.design_primary());
    const auto g2 = design_thresholds(table, targets.design_cognitive());
    return static_cast<int>(distinct_products(g1, g2).size()) + 1;
}

std::vector<int> rate_pair_map(double prod_lo, std::span<const double> g1,
                               std::span<const double> g2) {
    std::vector<int> k1(g2.size(), 0);
    for (std::size_t c = 1; c < g2.size(); ++c) {
        const double gamma_inf = prod_lo / g2[c];
        k1[c] = select_by_thresholds(g1, gamma_inf);
    }
    return k1;
}

RegionGrid build_grid(const AmcTable& table, const BerTargets& targets, int rays, int products,
                      const Scenario& scenario, std::uint64_t seed, std::int64_t pilot_samples) {
    if (rays < 1) throw std::invalid_argument("build_grid: need at least one ray sector");
    scenario.validate();
    RegionGrid grid(table, targets);

    const auto zs = distinct_products(grid.g1_thresholds(), grid.g2_thresholds());
    const int base_bands = static_cast<int>(zs.size()) + 1;
    if (products < base_bands)
        throw std::invalid_argument("build_grid: need at least " + std::to_string(base_bands) +
                                    " product bands for this table, got " + std::to_string(products));
    if (pilot_samples < 1000) throw std::invalid_argument("build_grid: pilot too small");

    // Pilot draws drive ray quantiles and auxiliary band splits.
    std::vector<double> prods, slopes;
    prods.reserve(static_cast<std::size_t>(pilot_samples));
    slopes.reserve(static_cast<std::size_t>(pilot_samples));
    Rng rng = Rng::stream(seed, 0);
    for (std::int64_t k = 0; k < pilot_samples; ++k) {
        const auto sample = sample_block(scenario, rng);
        const auto scaled = scaled_snirs(sample);
        prods.push_back(scaled.alpha * scaled.beta);
        slopes.push_back(scaled.beta / scaled.alpha);
    }

    if (rays > 1) {
        std::sort(slopes.begin(), slopes.end());
        grid.ray_bounds.reserve(static_cast<std::size_t>(rays) - 1);
        for (int j = 1; j < rays; ++j) {
            const double level =
                j == 1 ? kFirstRayQuantile
                       : kFirstRayQuantile + (1.0 - kFirstRayQuantile) * (j - 1) / (rays - 1);
            auto pos = static_cast<std::size_t>(level * static_cast<double>(slopes.size()));
            pos = std::min(pos, slopes.size() - 1);
            grid.ray_bounds.push_back(slopes[pos]);
        }
        for (std::size_t j = 1; j < grid.ray_bounds.size(); ++j)
            if (grid.ray_bounds[j] <= grid.ray_bounds[j - 1])
                throw std::runtime_error("build_grid: degenerate ray quantiles");
    }

    // Start from the common-rate-set bands, then split the highest
    // probability band at its conditional median until C bands exist.
    struct Band {
        double lo, hi;
        std::vector<double> members;  // sorted pilot products inside
    };
    std::sort(prods.begin(), prods.end());
    std::vector<Band> band_list;
    band_list.reserve(static_cast<std::size_t>(products));
    {
        std::size_t begin = 0;
        for (int b = 0; b < base_bands; ++b) {
            const double lo = b == 0 ? 0.0 : zs[static_cast<std::size_t>(b) - 1];
            const double hi = b == base_bands - 1 ? kInf : zs[static_cast<std::size_t>(b)];
            auto end = begin;
            while (end < prods.size() && prods[end] < hi) ++end;
            band_list.push_back({lo, hi, {prods.begin() + static_cast<std::ptrdiff_t>(begin),
                                          prods.begin() + static_cast<std::ptrdiff_t>(end)}});
            begin = end;
        }
    }
    for (int extra = products - base_bands; extra > 0; --extra) {
        std::size_t pick = 0;
        for (std::size_t b = 1; b < band_list.size(); ++b)
            if (band_list[b].members.size() > band_list[pick].members.size()) pick = b;
        Band& band = band_list[pick];
        double cut;
        if (band.members.size() >= 2) {
            cut = band.members[band.members.size() / 2];
        } else if (std::isinf(band.hi)) {
            cut = band.lo > 0 ? 2.0 * band.lo : 1.0;
        } else {
            cut = band.lo > 0 ? std::sqrt(band.lo * band.hi) : 0.5 * band.hi;
        }
        if (!(cut > band.lo) || !(cut < band.hi)) {
            cut = std::isinf(band.hi) ? 2.0 * std::max(band.lo, 1.0)
                                      : band.lo + 0.5 * (band.hi - band.lo);
        }
        if (!(cut > band.lo) || !(cut < band.hi))
            throw std::runtime_error("build_grid: cannot place auxiliary product boundary");
        const auto mid = std::lower_bound(band.members.begin(), band.members.end(), cut);
        Band upper{cut, band.hi, {mid, band.members.end()}};
        band.members.erase(mid, band.members.end());
        band.hi = cut;
        band_list.insert(band_list.begin() + static_cast<std::ptrdiff_t>(pick) + 1, std::move(upper));
    }

    grid.rays = rays;
    grid.bands = products;
    grid.product_bounds.clear();
    for (std::size_t b = 1; b < band_list.size(); ++b) grid.product_bounds.push_back(band_list[b].lo);

    grid.regions.clear();
    grid.regions.reserve(static_cast<std::size_t>(products) * static_cast<std::size_t>(rays));
    for (int b = 0; b < products; ++b) {
        const auto k1_map = rate_pair_map(band_list[static_cast<std::size_t>(b)].lo,
                                          grid.g1_thresholds(), grid.g2_thresholds());
        for (int j = 0; j < rays; ++j) {
            Region region;
            region.index = b * rays + j + 1;
            region.prod_lo = band_list[static_cast<std::size_t>(b)].lo;
            region.prod_hi = band_list[static_cast<std::size_t>(b)].hi;
            region.ray_lo = j == 0 ? 0.0 : grid.ray_bounds[static_cast<std::size_t>(j) - 1];
            region.ray_hi = j == rays - 1 ? kInf : grid.ray_bounds[static_cast<std::size_t>(j)];
            region.heavy_tailed = (j == 0);
            region.k1_mode = k1_map;
            grid.regions.push_back(std::move(region));
        }
    }
    grid.stats_ready = false;
    return grid;
}

void estimate_region_stats(RegionGrid& grid, const Scenario& scenario, std::int64_t n_samples,
                           std::uint64_t seed) {
    if (n_samples < 10000)
        throw std::invalid_argument("estimate_region_stats: need at least 1e4 samples");
    if (grid.regions.empty()) throw std::invalid_argument("estimate_region_stats: empty grid");
    scenario.validate();

    const std::size_t count = grid.regions.size();
    std::vector<std::int64_t> hits(count, 0);
    std::vector<double> inv_beta(count, 0.0), silent_rate(count, 0.0);
    const auto g1 = grid.g1_thresholds();
    const double p1 = scenario.primary_power;
    const double n0 = scenario.noise_power;

    // Fixed chunked streams: the merge order never depends on worker
    // count, so reports are reproducible from (seed, n_samples).
    constexpr int kChunks = 64;
    std::int64_t done = 0;
    for (int c = 0; c < kChunks; ++c) {
        const std::int64_t want = n_samples * (c + 1) / kChunks - done;
        done += want;
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(c) + 1);
        for (std::int64_t k = 0; k < want; ++k) {
            const auto sample = sample_block(scenario, rng);
            const auto scaled = scaled_snirs(sample);
            const auto idx = static_cast<std::size_t>(grid.locate(scaled)) - 1;
            hits[idx] += 1;
            inv_beta[idx] += 1.0 / scaled.beta;
            const int silent_mode = select_by_thresholds(g1, p1 * sample.s11 / n0);
            silent_rate[idx] += grid.rate(silent_mode);
        }
    }

    for (std::size_t i = 0; i < count; ++i) {
        Region& region = grid.regions[i];
        region.prob = static_cast<double>(hits[i]) / static_cast<double>(n_samples);
        region.norm_power = hits[i] ? p1 * inv_beta[i] / static_cast<double>(hits[i]) : 0.0;
        region.silent_primary_rate =
            hits[i] ? silent_rate[i] / static_cast<double>(hits[i]) : 0.0;
    }
    grid.stats_ready = true;
}

void write_grid_csv(const RegionGrid& grid, std::ostream& out) {
    out.precision(17);
    out << "region,prod_lo,prod_hi,ray_lo,ray_hi,prob,norm_power,silent_rate";
    for (int n = 1; n <= grid.top_mode(); ++n) out << ",k1_at_r" << n;
    out << '\n';
    for (const auto& region : grid.regions) {
        out << region.index << ',' << region.prod_lo << ',' << region.prod_hi << ','
            << region.ray_lo << ',' << region.ray_hi << ',' << region.prob << ','
            << region.norm_power << ',' << region.silent_primary_rate;
        for (int n = 1; n <= grid.top_mode(); ++n)
            out << ',' << grid.rate(region.k1_mode[static_cast<std::size_t>(n)]);
        out << '\n';
    }
}

}  // namespace crlink
