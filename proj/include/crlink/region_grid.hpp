#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "crlink/amc.hpp"
#include "crlink/channel.hpp"

namespace crlink {

/// One cell of the scaled-SNIR plane partition. A cell is the product
/// band [prod_lo, prod_hi) on alpha*beta intersected with the ray sector
/// [ray_lo, ray_hi) on beta/alpha. Cells in the first ray sector touch
/// beta = 0, where the mean of 1/beta diverges; they are flagged
/// heavy_tailed and the optimizer keeps them silent.
struct Region {
    int index = 0;  // 1-based
    double prod_lo = 0, prod_hi = 0;
    double ray_lo = 0, ray_hi = 0;
    bool heavy_tailed = false;

    double prob = 0.0;                // pr(i)
    double norm_power = 0.0;          // p(i) = P1 * E[1/beta | region]
    double silent_primary_rate = 0.0; // mean primary rate with cognitive off

    /// k1_mode[c] = primary mode induced by cognitive mode c >= 1, from
    /// the band's product infimum (worst case). Entry 0 is unused.
    std::vector<int> k1_mode;
};

/// Partition of the positive quadrant into rays x product-band cells,
/// with per-cell statistics estimated by Monte Carlo. Immutable once
/// statistics are filled; safe for concurrent reads.
class RegionGrid {
  public:
    RegionGrid(AmcTable table, BerTargets targets);

    const AmcTable& table() const { return table_; }
    const BerTargets& targets() const { return targets_; }
    int top_mode() const { return table_.top_mode(); }
    double rate(int mode) const { return table_.rate(mode); }

    /// Design thresholds at the tightened targets; g*(0) == 0 so that a
    /// step into silence carries no transmit power.
    double g1(int mode) const { return g1_.at(static_cast<std::size_t>(mode)); }
    double g2(int mode) const { return g2_.at(static_cast<std::size_t>(mode)); }
    std::span<const double> g1_thresholds() const { return g1_; }
    std::span<const double> g2_thresholds() const { return g2_; }

    int count() const { return static_cast<int>(regions.size()); }
    const Region& region(int index) const { return regions.at(static_cast<std::size_t>(index - 1)); }

    /// Region index of a scaled-SNIR point (alpha, beta > 0). Half-open
    /// cells: a point on a boundary belongs to the upper band/sector.
    int locate(const ScaledSnir& point) const;

    int rays = 1;   // L ray sectors
    int bands = 1;  // C product bands
    std::vector<double> product_bounds;  // interior boundaries, ascending
    std::vector<double> ray_bounds;      // interior boundaries, ascending
    std::vector<Region> regions;         // row-major: band * rays + sector
    bool stats_ready = false;

  private:
    AmcTable table_;
    BerTargets targets_;
    std::vector<double> g1_, g2_;
};

/// Number of common-rate-set bands induced by the table at the given
/// targets: the count of distinct pairwise threshold products plus one.
int count_common_rate_bands(const AmcTable& table, const BerTargets& targets);

/// Partition geometry. `products` (C) must be at least the common-rate
/// band count; the surplus product boundaries subdivide the highest
/// probability bands at their conditional median, and interior rays are
/// placed at quantiles of beta/alpha, both from a pilot Monte Carlo run.
RegionGrid build_grid(const AmcTable& table, const BerTargets& targets, int rays, int products,
                      const Scenario& scenario, std::uint64_t seed,
                      std::int64_t pilot_samples = 100000);

/// Fill per-region prob, norm_power and silent_primary_rate from
/// n_samples fading draws (at least 1e4). Deterministic for fixed seed.
void estimate_region_stats(RegionGrid& grid, const Scenario& scenario, std::int64_t n_samples,
                           std::uint64_t seed);

/// Induced primary mode per cognitive mode for a band with the given
/// product infimum: the highest mode whose primary threshold fits under
/// prod_lo / g2[c]; 0 (outage) when even the lowest mode does not.
std::vector<int> rate_pair_map(double prod_lo, std::span<const double> g1,
                               std::span<const double> g2);

/// CSV dump: region,prod_lo,prod_hi,ray_lo,ray_hi,prob,norm_power,
/// silent_rate,k1_at_r1..k1_at_rN.
void write_grid_csv(const RegionGrid& grid, std::ostream& out);

}  // namespace crlink
