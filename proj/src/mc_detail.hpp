#pragma once

#include <cmath>
#include <cstdint>

#include "crlink/evaluate.hpp"
#include "crlink/rng.hpp"

namespace crlink::detail {

/// Per-block accumulator for the common report fields.
struct BlockAccumulator {
    double rate1 = 0, rate1_sq = 0;
    double rate2 = 0, rate2_sq = 0;
    double power = 0, power_sq = 0;
    std::int64_t outage1 = 0, silent2 = 0, viol1 = 0, viol2 = 0;
    std::int64_t n = 0;

    void add(double r1, double r2, double p2, bool primary_outage, bool cognitive_silent,
             bool primary_viol, bool cognitive_viol) {
        rate1 += r1;
        rate1_sq += r1 * r1;
        rate2 += r2;
        rate2_sq += r2 * r2;
        power += p2;
        power_sq += p2 * p2;
        outage1 += primary_outage ? 1 : 0;
        silent2 += cognitive_silent ? 1 : 0;
        viol1 += primary_viol ? 1 : 0;
        viol2 += cognitive_viol ? 1 : 0;
        n += 1;
    }

    EvaluationReport finish(std::uint64_t seed) const {
        EvaluationReport report;
        report.n_blocks = n;
        report.seed = seed;
        if (n == 0) return report;
        const double dn = static_cast<double>(n);
        auto mean_se = [dn, this](double sum, double sum_sq, double& mean, double& se) {
            mean = sum / dn;
            if (n < 2) return;
            const double var = std::max(0.0, (sum_sq - dn * mean * mean) / (dn - 1.0));
            se = std::sqrt(var / dn);
        };
        mean_se(rate1, rate1_sq, report.primary_ase, report.se_primary_ase);
        mean_se(rate2, rate2_sq, report.cognitive_ase, report.se_cognitive_ase);
        mean_se(power, power_sq, report.avg_cognitive_power, report.se_cognitive_power);
        report.primary_outage_prob = static_cast<double>(outage1) / dn;
        report.cognitive_silence_prob = static_cast<double>(silent2) / dn;
        report.ber_violation_rate_primary = static_cast<double>(viol1) / dn;
        report.ber_violation_rate_cognitive = static_cast<double>(viol2) / dn;
        return report;
    }
};

/// Run `fn(rng, acc)` once per block over a fixed 64-chunk stream layout,
/// so results never depend on how work would be sharded across workers.
template <typename BlockFn>
void run_blocks(std::int64_t n_blocks, std::uint64_t seed, BlockAccumulator& acc, BlockFn&& fn) {
    constexpr int kChunks = 64;
    std::int64_t done = 0;
    for (int c = 0; c < kChunks; ++c) {
        const std::int64_t want = n_blocks * (c + 1) / kChunks - done;
        done += want;
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(c) + 1);
        for (std::int64_t k = 0; k < want; ++k) fn(rng, acc);
    }
}

}  // namespace crlink::detail
