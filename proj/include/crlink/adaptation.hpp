#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "crlink/region_grid.hpp"

namespace crlink {

/// A cognitive transmission policy. Variable-power policies assign one
/// cognitive mode per grid region (power follows from the BER-tight
/// inversion); constant-power policies carry a single transmit power and
/// let both links run plain AMC. Predicted averages are recomputed from
/// the grid statistics at the end of optimization, so re-deriving them
/// from the grid reproduces the stored values exactly.
struct Policy {
    enum class Kind { variable_power, constant_power };

    Kind kind = Kind::variable_power;
    bool feasible = false;

    std::vector<int> k2_mode;      // per region; variable kind
    std::vector<double> k1_value;  // induced primary rate per region
    double constant_power = 0.0;   // constant kind

    double k1_avg = 0.0;  // bits/s/Hz
    double k2_avg = 0.0;  // bits/s/Hz
    double p2_avg = 0.0;  // watts
};

/// Greedy decision variables per region at the current assignment.
/// d1: primary-rate gain per unit of cognitive rate given up (0 when the
///     induced primary rate is already at the top mode);
/// d2: power saved per unit of cognitive rate for a single-mode step;
/// d3: power saved per unit of cognitive rate over the d1 step.
/// Regions that cannot take the corresponding step (silent, pinned, or
/// without a primary-rate-improving step for d1/d3) carry -inf so an
/// argmax never picks them. `step` is the mode count of the d1/d3 step.
struct DecisionState {
    std::vector<double> d1, d2, d3;
    std::vector<int> step;
};

struct GreedyTrace {
    struct Iterate {
        double k1_avg, k2_avg, p2_avg;
        int region;
        int from_mode, to_mode;
    };
    std::vector<Iterate> steps;
};

DecisionState compute_decisions(const RegionGrid& grid, const std::vector<int>& k2_mode);

/// Variable-power optimizer: start every region at the top mode and
/// greedily reduce the rate where the relevant decision variable is
/// largest until the primary-efficiency and power constraints hold, or
/// until no reduction can help (then feasible=false, everything silent).
/// Heavy-tailed and zero-probability regions stay silent throughout.
Policy optimize_variable_power(const RegionGrid& grid, const Scenario& scenario,
                               GreedyTrace* trace = nullptr);

/// Exact optimum by enumeration; test oracle only. Refuses instances
/// with more than ~1e7 assignments.
Policy brute_force_policy(const RegionGrid& grid, const Scenario& scenario);

struct EvalBudget {
    std::int64_t n_blocks = 200000;
    std::uint64_t seed = 1;
};

/// Constant-power scheme: bisect the transmit power on [0, budget]
/// against the Monte Carlo primary efficiency (common random numbers
/// keep the map monotone), returning the largest power that still meets
/// the primary requirement, capped at the budget.
Policy optimize_constant_power(const Scenario& scenario, const AmcTable& table,
                               const EvalBudget& budget);

/// CSV dump: region,k2,k1,prob,norm_power with predicted averages in
/// `#` header lines. `header_note` is appended to the metadata verbatim.
void write_policy_csv(const Policy& policy, const RegionGrid* grid, std::ostream& out,
                      std::string_view header_note = {});

}  // namespace crlink
