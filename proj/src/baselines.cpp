#include "crlink/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mc_detail.hpp"

namespace crlink {

void UnderlayConfig::validate() const {
    if (interference_threshold < 0 || peak_power < 0)
        throw std::invalid_argument("underlay: threshold and peak power must be non-negative");
}

void TdmaConfig::validate() const {
    if (cognitive_share < 0 || cognitive_share > 1)
        throw std::invalid_argument("tdma: cognitive share must lie in [0,1]");
}

UnderlayBlockResult underlay_block(const FadingSample& sample, const UnderlayConfig& config,
                                   const Scenario& scenario, const AmcTable& table) {
    config.validate();
    const double p1 = scenario.primary_power;
    const double n0 = scenario.noise_power;
    const double cap = sample.s21 > 0
                           ? std::min(config.peak_power, config.interference_threshold / sample.s21)
                           : config.peak_power;
    const double gamma2 = cap * sample.s22 / (p1 * sample.s12 + n0);
    const AmcMode& mode2 =
        select_mode(gamma2, table, scenario.ber_targets.design_cognitive());
    const double p2 = mode2.index > 0 ? cap : 0.0;
    const double gamma1 = p1 * sample.s11 / (p2 * sample.s21 + n0);
    const AmcMode& mode1 = select_mode(gamma1, table, scenario.ber_targets.design_primary());
    return {p2, mode2.index, mode1.index};
}

EvaluationReport evaluate_underlay(const Scenario& scenario, const AmcTable& table,
                                   const UnderlayConfig& config, std::int64_t n_blocks,
                                   std::uint64_t seed) {
    if (n_blocks < 1) throw std::invalid_argument("evaluate_underlay: need at least one block");
    scenario.validate();
    config.validate();

    const double p1 = scenario.primary_power;
    const double n0 = scenario.noise_power;
    const double b1 = scenario.ber_targets.primary;
    const double b2 = scenario.ber_targets.cognitive;
    const ThresholdSet nu1(table, scenario.ber_targets.design_primary());
    const ThresholdSet nu2(table, scenario.ber_targets.design_cognitive());

    detail::BlockAccumulator acc;
    detail::run_blocks(n_blocks, seed, acc, [&](Rng& rng, detail::BlockAccumulator& a) {
        const auto sample = sample_block(scenario, rng);
        const double cap =
            sample.s21 > 0 ? std::min(config.peak_power, config.interference_threshold / sample.s21)
                           : config.peak_power;
        const double gamma2 = cap * sample.s22 / (p1 * sample.s12 + n0);
        const int m2 = nu2.select(gamma2);
        const double p2 = m2 > 0 ? cap : 0.0;
        const double gamma1 = p1 * sample.s11 / (p2 * sample.s21 + n0);
        const int m1 = nu1.select(gamma1);
        const bool viol1 = m1 > 0 && ber(gamma1, table.mode(m1)) > b1;
        const bool viol2 = m2 > 0 && ber(gamma2, table.mode(m2)) > b2;
        a.add(table.rate(m1), table.rate(m2), p2, m1 == 0, m2 == 0, viol1, viol2);
    });
    return acc.finish(seed);
}

double calibrate_underlay_peak(const Scenario& scenario, const AmcTable& table,
                               std::int64_t n_pilot, std::uint64_t seed) {
    scenario.validate();
    const double budget = scenario.cognitive_power_budget;
    if (budget <= 0) return 0.0;

    constexpr double kLoosePth = std::numeric_limits<double>::infinity();
    auto avg_power = [&](double peak) {
        return evaluate_underlay(scenario, table, {kLoosePth, peak}, n_pilot, seed)
            .avg_cognitive_power;
    };

    double hi = budget;
    int doublings = 0;
    while (avg_power(hi) < budget) {
        hi *= 2.0;
        if (++doublings > 60)
            throw std::runtime_error("calibrate_underlay_peak: budget unreachable");
    }
    double lo = 0.0;
    for (int it = 0; it < 48; ++it) {
        const double mid = 0.5 * (lo + hi);
        (avg_power(mid) < budget ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

TdmaResult interweave_tdma(const Scenario& scenario, const AmcTable& table,
                           const TdmaConfig& config, std::int64_t n_blocks, std::uint64_t seed) {
    if (n_blocks < 1) throw std::invalid_argument("interweave_tdma: need at least one block");
    scenario.validate();
    config.validate();

    const double tau = config.cognitive_share;
    const double p1 = scenario.primary_power;
    const double n0 = scenario.noise_power;
    const double budget = scenario.cognitive_power_budget;
    // Average-power-fair bursting, capped to avoid unbounded peaks at
    // small tau.
    const double burst = tau > 0 ? std::min(budget / tau, 10.0 * budget) : 0.0;
    const ThresholdSet nu1(table, scenario.ber_targets.design_primary());
    const ThresholdSet nu2(table, scenario.ber_targets.design_cognitive());

    // Interference-free conditional passes, weighted by the time shares.
    detail::BlockAccumulator primary_acc;
    detail::run_blocks(n_blocks, derive_seed(seed, 1), primary_acc,
                       [&](Rng& rng, detail::BlockAccumulator& a) {
                           const auto sample = sample_block(scenario, rng);
                           const int m1 = nu1.select(p1 * sample.s11 / n0);
                           a.add(table.rate(m1), 0.0, 0.0, m1 == 0, true, false, false);
                       });
    detail::BlockAccumulator cognitive_acc;
    detail::run_blocks(n_blocks, derive_seed(seed, 2), cognitive_acc,
                       [&](Rng& rng, detail::BlockAccumulator& a) {
                           const auto sample = sample_block(scenario, rng);
                           const int m2 = nu2.select(burst * sample.s22 / n0);
                           a.add(0.0, table.rate(m2), m2 > 0 ? burst : 0.0, false, m2 == 0,
                                 false, false);
                       });

    const auto primary = primary_acc.finish(seed);
    const auto cognitive = cognitive_acc.finish(seed);
    TdmaResult result;
    result.primary_ase = (1.0 - tau) * primary.primary_ase;
    result.cognitive_ase = tau * cognitive.cognitive_ase;
    result.avg_cognitive_power = tau * cognitive.avg_cognitive_power;
    result.se_primary_ase = (1.0 - tau) * primary.se_primary_ase;
    result.se_cognitive_ase = tau * cognitive.se_cognitive_ase;
    return result;
}

}  // namespace crlink
