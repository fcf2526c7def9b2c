#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "crlink/adaptation.hpp"

namespace crlink {

/// Block-level Monte Carlo measurement of a policy. Evaluation always
/// includes thermal noise in the SNIRs, so the design-side noise neglect
/// shows up here as BER-margin erosion. Reports are bit-identical across
/// reruns for fixed (seed, n_blocks).
struct EvaluationReport {
    double primary_ase = 0.0;
    double cognitive_ase = 0.0;
    double avg_cognitive_power = 0.0;
    double primary_outage_prob = 0.0;
    double cognitive_silence_prob = 0.0;
    double ber_violation_rate_primary = 0.0;   // against the application target
    double ber_violation_rate_cognitive = 0.0;
    double se_primary_ase = 0.0;
    double se_cognitive_ase = 0.0;
    double se_cognitive_power = 0.0;
    std::int64_t n_blocks = 0;
    std::uint64_t seed = 0;
};

/// Variable-power policy against its grid. The primary re-selects its
/// mode from the realized SNIR each block; the grid's induced rate is a
/// design-time prediction and is not reused here.
EvaluationReport evaluate_policy(const Policy& policy, const RegionGrid& grid,
                                 const Scenario& scenario, std::int64_t n_blocks,
                                 std::uint64_t seed);

/// Constant-power policy; both links run plain AMC at the design targets.
EvaluationReport evaluate_policy(const Policy& policy, const AmcTable& table,
                                 const Scenario& scenario, std::int64_t n_blocks,
                                 std::uint64_t seed);

enum class Scheme { variable, constant, underlay, interweave };

std::string_view scheme_name(Scheme scheme);

struct SweepConfig {
    int rays = 2;
    int products = 50;
    std::int64_t mc_samples = 200000;  // design-side sampling (grid stats, bisections)
    std::int64_t n_blocks = 200000;    // final measurement per point
    std::uint64_t seed = 1;
};

struct TradeoffPoint {
    double k1_req = 0.0;
    bool feasible = false;
    double param = 0.0;  // scheme knob: P2, Pth or tau; unused for variable
    double predicted_k1 = 0.0, predicted_k2 = 0.0, predicted_p2 = 0.0;
    Policy policy;  // filled for variable and constant schemes
    EvaluationReport report;
};

/// One optimized + measured point per requirement (ascending). Infeasible
/// requirements yield points flagged infeasible with a best-effort
/// (silent-cognitive) measurement attached.
std::vector<TradeoffPoint> sweep_tradeoff(Scheme scheme, const Scenario& scenario,
                                          const AmcTable& table, std::span<const double> k1_reqs,
                                          const SweepConfig& config);

/// The grid a variable-power sweep runs on, reproducible from the config
/// seed. Splitting this out lets callers dump the same grid the sweep
/// used.
RegionGrid build_sweep_grid(const Scenario& scenario, const AmcTable& table,
                            const SweepConfig& config);

std::vector<TradeoffPoint> sweep_variable_with_grid(const RegionGrid& grid,
                                                    const Scenario& scenario,
                                                    std::span<const double> k1_reqs,
                                                    const SweepConfig& config);

/// CSV: scheme,k1_req,k1_ase,k2_ase,p2_avg,outage,ber_viol_p,ber_viol_c,
/// se_k1,se_k2,n_blocks,seed,status.
void write_report_csv(std::span<const TradeoffPoint> points, std::string_view scheme,
                      std::ostream& out);

}  // namespace crlink
