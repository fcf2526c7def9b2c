#pragma once

#include <cstdint>

#include "crlink/evaluate.hpp"

namespace crlink {

/// Underlay operation: per-block power capped so the interference seen
/// at the primary receiver stays below the threshold, with a peak cap.
struct UnderlayConfig {
    double interference_threshold = 0.0;  // Pth
    double peak_power = 0.0;

    void validate() const;
};

/// Interweave operation: time-shared channel access, cognitive share tau.
struct TdmaConfig {
    double cognitive_share = 0.0;  // tau in [0, 1]

    void validate() const;
};

struct UnderlayBlockResult {
    double p2 = 0.0;  // actually radiated power (0 on a cognitive outage)
    int k2_mode = 0;
    int k1_mode = 0;
};

/// One underlay block: power min(peak, Pth/s21), then both links select
/// modes from realized SNIRs at the design targets. Outage blocks
/// radiate nothing, so p2 * s21 <= Pth holds on every block.
UnderlayBlockResult underlay_block(const FadingSample& sample, const UnderlayConfig& config,
                                   const Scenario& scenario, const AmcTable& table);

EvaluationReport evaluate_underlay(const Scenario& scenario, const AmcTable& table,
                                   const UnderlayConfig& config, std::int64_t n_blocks,
                                   std::uint64_t seed);

/// Peak cap making the average radiated underlay power meet the budget
/// when the interference threshold is loose (the power-fair operating
/// point); tightening Pth afterwards only lowers the average power.
double calibrate_underlay_peak(const Scenario& scenario, const AmcTable& table,
                               std::int64_t n_pilot, std::uint64_t seed);

struct TdmaResult {
    double primary_ase = 0.0;
    double cognitive_ase = 0.0;
    double avg_cognitive_power = 0.0;
    double se_primary_ase = 0.0;
    double se_cognitive_ase = 0.0;
};

/// TDMA interweave: fraction (1 - tau) of blocks primary-only at P1,
/// fraction tau cognitive-only bursting at min(budget/tau, 10 * budget);
/// spectral efficiencies are time-share weighted.
TdmaResult interweave_tdma(const Scenario& scenario, const AmcTable& table,
                           const TdmaConfig& config, std::int64_t n_blocks, std::uint64_t seed);

}  // namespace crlink
