#include "crlink/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "crlink/baselines.hpp"
#include "mc_detail.hpp"

namespace crlink {

EvaluationReport evaluate_policy(const Policy& policy, const RegionGrid& grid,
                                 const Scenario& scenario, std::int64_t n_blocks,
                                 std::uint64_t seed) {
    if (policy.kind != Policy::Kind::variable_power)
        throw std::invalid_argument("evaluate_policy: grid evaluation expects a variable-power policy");
    if (static_cast<int>(policy.k2_mode.size()) != grid.count())
        throw std::invalid_argument("evaluate_policy: policy region count does not match grid");
    if (n_blocks < 1) throw std::invalid_argument("evaluate_policy: need at least one block");
    scenario.validate();

    const AmcTable& table = grid.table();
    const double p1 = scenario.primary_power;
    const double n0 = scenario.noise_power;
    const double b1 = scenario.ber_targets.primary;
    const double b2 = scenario.ber_targets.cognitive;
    const auto g1 = grid.g1_thresholds();

    detail::BlockAccumulator acc;
    detail::run_blocks(n_blocks, seed, acc, [&](Rng& rng, detail::BlockAccumulator& a) {
        const auto sample = sample_block(scenario, rng);
        const auto scaled = scaled_snirs(sample);
        const int region = grid.locate(scaled);
        const int m2 = policy.k2_mode[static_cast<std::size_t>(region - 1)];
        const double p2 = m2 > 0 ? p1 * grid.g2(m2) / scaled.beta : 0.0;
        const auto gamma = snir(sample, p1, p2, n0);
        const int m1 = select_by_thresholds(g1, gamma.primary);
        const bool viol1 = m1 > 0 && ber(gamma.primary, table.mode(m1)) > b1;
        const bool viol2 = m2 > 0 && ber(gamma.cognitive, table.mode(m2)) > b2;
        a.add(grid.rate(m1), grid.rate(m2), p2, m1 == 0, m2 == 0, viol1, viol2);
    });
    return acc.finish(seed);
}

EvaluationReport evaluate_policy(const Policy& policy, const AmcTable& table,
                                 const Scenario& scenario, std::int64_t n_blocks,
                                 std::uint64_t seed) {
    if (policy.kind != Policy::Kind::constant_power)
        throw std::invalid_argument("evaluate_policy: table evaluation expects a constant-power policy");
    if (policy.constant_power < 0)
        throw std::invalid_argument("evaluate_policy: negative constant power");
    if (n_blocks < 1) throw std::invalid_argument("evaluate_policy: need at least one block");
    scenario.validate();

    const double p1 = scenario.primary_power;
    const double n0 = scenario.noise_power;
    const double b1 = scenario.ber_targets.primary;
    const double b2 = scenario.ber_targets.cognitive;
    const ThresholdSet nu1(table, scenario.ber_targets.design_primary());
    const ThresholdSet nu2(table, scenario.ber_targets.design_cognitive());
    const double p2_fixed = policy.constant_power;

    detail::BlockAccumulator acc;
    detail::run_blocks(n_blocks, seed, acc, [&](Rng& rng, detail::BlockAccumulator& a) {
        const auto sample = sample_block(scenario, rng);
        // The cognitive link rates itself from its own SNIR; outage
        // blocks radiate nothing and leave the primary clean.
        const double gamma2 = p2_fixed * sample.s22 / (p1 * sample.s12 + n0);
        const int m2 = nu2.select(gamma2);
        const double p2 = m2 > 0 ? p2_fixed : 0.0;
        const double gamma1 = p1 * sample.s11 / (p2 * sample.s21 + n0);
        const int m1 = nu1.select(gamma1);
        const bool viol1 = m1 > 0 && ber(gamma1, table.mode(m1)) > b1;
        const bool viol2 = m2 > 0 && ber(gamma2, table.mode(m2)) > b2;
        a.add(table.rate(m1), table.rate(m2), p2, m1 == 0, m2 == 0, viol1, viol2);
    });
    return acc.finish(seed);
}

std::string_view scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::variable: return "variable";
        case Scheme::constant: return "constant";
        case Scheme::underlay: return "underlay";
        case Scheme::interweave: return "interweave";
    }
    throw std::invalid_argument("scheme_name: unknown scheme");
}

namespace {

void check_ascending(std::span<const double> reqs) {
    if (reqs.empty()) throw std::invalid_argument("sweep_tradeoff: empty requirement list");
    for (std::size_t i = 1; i < reqs.size(); ++i)
        if (reqs[i] < reqs[i - 1])
            throw std::invalid_argument("sweep_tradeoff: requirements must ascend");
}

EvaluationReport report_from_tdma(const TdmaResult& result, std::int64_t n_blocks,
                                  std::uint64_t seed) {
    EvaluationReport report;
    report.primary_ase = result.primary_ase;
    report.cognitive_ase = result.cognitive_ase;
    report.avg_cognitive_power = result.avg_cognitive_power;
    report.se_primary_ase = result.se_primary_ase;
    report.se_cognitive_ase = result.se_cognitive_ase;
    report.n_blocks = n_blocks;
    report.seed = seed;
    return report;
}

std::vector<TradeoffPoint> sweep_constant(const Scenario& base, const AmcTable& table,
                                          std::span<const double> reqs, const SweepConfig& cfg) {
    const EvalBudget budget{std::min<std::int64_t>(cfg.mc_samples, 100000),
                            derive_seed(cfg.seed, 201)};
    const std::uint64_t eval_seed = derive_seed(cfg.seed, 202);

    std::vector<TradeoffPoint> points;
    for (const double req : reqs) {
        Scenario s = base;
        s.required_primary_ase = req;
        TradeoffPoint point;
        point.k1_req = req;
        point.policy = optimize_constant_power(s, table, budget);
        point.feasible = point.policy.feasible;
        point.param = point.policy.constant_power;
        point.predicted_k1 = point.policy.k1_avg;
        point.predicted_k2 = point.policy.k2_avg;
        point.predicted_p2 = point.policy.p2_avg;
        Policy measured = point.policy;
        if (!measured.feasible) measured.constant_power = 0.0;
        point.report = evaluate_policy(measured, table, s, cfg.n_blocks, eval_seed);
        points.push_back(std::move(point));
    }
    return points;
}

std::vector<TradeoffPoint> sweep_underlay(const Scenario& base, const AmcTable& table,
                                          std::span<const double> reqs, const SweepConfig& cfg) {
    const std::uint64_t calib_seed = derive_seed(cfg.seed, 301);
    const std::uint64_t eval_seed = derive_seed(cfg.seed, 302);
    const std::int64_t pilot = std::min<std::int64_t>(cfg.mc_samples, 100000);

    const double peak = calibrate_underlay_peak(base, table, pilot, calib_seed);
    auto primary_at = [&](double pth) {
        return evaluate_underlay(base, table, {pth, peak}, pilot, calib_seed).primary_ase;
    };
    const double standalone = primary_at(0.0);

    std::vector<TradeoffPoint> points;
    for (const double req : reqs) {
        TradeoffPoint point;
        point.k1_req = req;
        if (standalone < req) {
            point.feasible = false;
            point.param = 0.0;
            point.report = evaluate_underlay(base, table, {0.0, peak}, cfg.n_blocks, eval_seed);
            points.push_back(point);
            continue;
        }
        // Largest interference threshold still meeting the requirement;
        // with the peak fixed the map pth -> primary ASE is monotone
        // under common random numbers.
        double lo = 0.0;
        double hi = std::max(base.cognitive_power_budget * base.s21_mean, base.noise_power);
        bool bounded = false;
        for (int it = 0; it < 60 && !bounded; ++it) {
            if (primary_at(hi) < req)
                bounded = true;
            else
                hi *= 2.0;
        }
        double pth = hi;
        if (bounded) {
            for (int it = 0; it < 48; ++it) {
                const double mid = 0.5 * (lo + hi);
                (primary_at(mid) >= req ? lo : hi) = mid;
            }
            pth = lo;
        }
        point.feasible = true;
        point.param = pth;
        point.report = evaluate_underlay(base, table, {pth, peak}, cfg.n_blocks, eval_seed);
        points.push_back(point);
    }
    return points;
}

std::vector<TradeoffPoint> sweep_interweave(const Scenario& base, const AmcTable& table,
                                            std::span<const double> reqs, const SweepConfig& cfg) {
    const std::uint64_t pilot_seed = derive_seed(cfg.seed, 401);
    const std::uint64_t eval_seed = derive_seed(cfg.seed, 402);
    const std::int64_t pilot = std::min<std::int64_t>(cfg.mc_samples, 100000);

    const double standalone =
        interweave_tdma(base, table, {0.0}, pilot, pilot_seed).primary_ase;

    std::vector<TradeoffPoint> points;
    for (const double req : reqs) {
        TradeoffPoint point;
        point.k1_req = req;
        if (standalone < req || standalone <= 0.0) {
            point.feasible = false;
            point.param = 0.0;
            point.report = report_from_tdma(interweave_tdma(base, table, {0.0}, cfg.n_blocks,
                                                            eval_seed),
                                            cfg.n_blocks, eval_seed);
            points.push_back(point);
            continue;
        }
        const double tau = std::clamp(1.0 - req / standalone, 0.0, 1.0);
        point.feasible = true;
        point.param = tau;
        point.report =
            report_from_tdma(interweave_tdma(base, table, {tau}, cfg.n_blocks, eval_seed),
                             cfg.n_blocks, eval_seed);
        points.push_back(point);
    }
    return points;
}

}  // namespace

RegionGrid build_sweep_grid(const Scenario& scenario, const AmcTable& table,
                            const SweepConfig& config) {
    RegionGrid grid = build_grid(table, scenario.ber_targets, config.rays, config.products,
                                 scenario, derive_seed(config.seed, 101));
    estimate_region_stats(grid, scenario, config.mc_samples, derive_seed(config.seed, 102));
    return grid;
}

std::vector<TradeoffPoint> sweep_variable_with_grid(const RegionGrid& grid,
                                                    const Scenario& base,
                                                    std::span<const double> k1_reqs,
                                                    const SweepConfig& config) {
    check_ascending(k1_reqs);
    const std::uint64_t eval_seed = derive_seed(config.seed, 103);
    std::vector<TradeoffPoint> points;
    for (const double req : k1_reqs) {
        Scenario s = base;
        s.required_primary_ase = req;
        TradeoffPoint point;
        point.k1_req = req;
        point.policy = optimize_variable_power(grid, s);
        point.feasible = point.policy.feasible;
        point.predicted_k1 = point.policy.k1_avg;
        point.predicted_k2 = point.policy.k2_avg;
        point.predicted_p2 = point.policy.p2_avg;
        point.report = evaluate_policy(point.policy, grid, s, config.n_blocks, eval_seed);
        points.push_back(std::move(point));
    }
    return points;
}

std::vector<TradeoffPoint> sweep_tradeoff(Scheme scheme, const Scenario& scenario,
                                          const AmcTable& table, std::span<const double> k1_reqs,
                                          const SweepConfig& config) {
    check_ascending(k1_reqs);
    scenario.validate();
    switch (scheme) {
        case Scheme::variable: {
            const RegionGrid grid = build_sweep_grid(scenario, table, config);
            return sweep_variable_with_grid(grid, scenario, k1_reqs, config);
        }
        case Scheme::constant: return sweep_constant(scenario, table, k1_reqs, config);
        case Scheme::underlay: return sweep_underlay(scenario, table, k1_reqs, config);
        case Scheme::interweave: return sweep_interweave(scenario, table, k1_reqs, config);
    }
    throw std::invalid_argument("sweep_tradeoff: unknown scheme");
}

void write_report_csv(std::span<const TradeoffPoint> points, std::string_view scheme,
                      std::ostream& out) {
    out.precision(17);
    out << "scheme,k1_req,k1_ase,k2_ase,p2_avg,outage,ber_viol_p,ber_viol_c,se_k1,se_k2,"
           "n_blocks,seed,status\n";
    for (const auto& point : points) {
        const auto& r = point.report;
        out << scheme << ',' << point.k1_req << ',' << r.primary_ase << ',' << r.cognitive_ase
            << ',' << r.avg_cognitive_power << ',' << r.primary_outage_prob << ','
            << r.ber_violation_rate_primary << ',' << r.ber_violation_rate_cognitive << ','
            << r.se_primary_ase << ',' << r.se_cognitive_ase << ',' << r.n_blocks << ','
            << r.seed << ',' << (point.feasible ? "ok" : "infeasible") << '\n';
    }
}

}  // namespace crlink
