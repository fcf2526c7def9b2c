#include "crlink/runner.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "crlink/baselines.hpp"
#include "crlink/evaluate.hpp"

namespace crlink {

std::vector<double> parse_k1_req(const std::string& text) {
    std::vector<double> values;
    if (text.find(':') != std::string::npos) {
        double a = 0, b = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || (in >> std::ws, !in.eof()))
            throw std::invalid_argument("k1-req: expected `first:last:step`, got `" + text + "`");
        if (step <= 0) throw std::invalid_argument("k1-req: step must be positive");
        if (b < a) throw std::invalid_argument("k1-req: range end below start");
        for (double v = a; v <= b + step * 1e-9; v += step) values.push_back(v);
    } else {
        std::istringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) {
            std::istringstream field(item);
            double v = 0;
            std::string extra;
            if (!(field >> v) || field >> extra)
                throw std::invalid_argument("k1-req: bad value `" + item + "`");
            values.push_back(v);
        }
        if (values.empty()) throw std::invalid_argument("k1-req: empty list");
    }
    return values;
}

namespace {

std::vector<Scheme> expand_schemes(const std::string& name) {
    if (name == "all")
        return {Scheme::variable, Scheme::constant, Scheme::underlay, Scheme::interweave};
    if (name == "variable") return {Scheme::variable};
    if (name == "constant") return {Scheme::constant};
    if (name == "underlay") return {Scheme::underlay};
    if (name == "interweave") return {Scheme::interweave};
    throw std::invalid_argument("scheme: expected variable|constant|underlay|interweave|all, got `" +
                                name + "`");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string scenario_template() {
    Scenario scenario;
    return scenario.to_document();
}

}  // namespace

int run(const RunSpec& spec) {
    try {
        if (spec.emit_defaults) {
            std::cout << "# ---- default AMC mode table ----\n"
                      << AmcTable::default_table_document()
                      << "# ---- scenario template ----\n"
                      << scenario_template();
            return 0;
        }

        const AmcTable table = spec.table_path.empty() ? AmcTable::default_table()
                                                       : AmcTable::load(spec.table_path);
        Scenario scenario =
            spec.scenario_path.empty() ? Scenario{} : Scenario::load(spec.scenario_path);
        scenario.validate();

        if (spec.rays < 1) throw std::invalid_argument("rays: need at least one sector");
        if (spec.products < 1) throw std::invalid_argument("products: need at least one band");
        if (spec.mc_samples < 10000) throw std::invalid_argument("mc-samples: need at least 1e4");
        if (spec.n_blocks < 1) throw std::invalid_argument("blocks: need at least one block");
        if (spec.regions < 0) throw std::invalid_argument("regions: must be non-negative");

        SweepConfig config;
        config.rays = spec.rays;
        config.products = spec.products;
        if (spec.regions > 0) {
            // Region-count target: two sectors, bands to make up the count
            // (never fewer than the table requires).
            const int min_bands = count_common_rate_bands(table, scenario.ber_targets);
            config.rays = spec.regions >= 2 ? 2 : 1;
            config.products = std::max(min_bands, (spec.regions + config.rays - 1) / config.rays);
        }
        config.mc_samples = spec.mc_samples;
        config.n_blocks = spec.n_blocks;
        config.seed = spec.seed;

        std::vector<double> reqs =
            spec.k1_reqs.empty() ? std::vector<double>{scenario.required_primary_ase}
                                 : spec.k1_reqs;
        std::sort(reqs.begin(), reqs.end());

        std::filesystem::create_directories(spec.out_dir);

        {
            std::ostringstream manifest;
            manifest.precision(17);
            manifest << "# crlink run manifest\n"
                     << "seed = " << spec.seed << "\n"
                     << "scheme = " << spec.scheme << "\n"
                     << "rays = " << config.rays << "\n"
                     << "products = " << config.products << "\n"
                     << "regions_target = " << spec.regions << "\n"
                     << "mc_samples = " << config.mc_samples << "\n"
                     << "n_blocks = " << config.n_blocks << "\n";
            manifest << "k1_reqs =";
            for (const double r : reqs) manifest << ' ' << r;
            manifest << "\n";
            manifest << "scenario_path = "
                     << (spec.scenario_path.empty() ? "builtin" : spec.scenario_path.string())
                     << "\n"
                     << "table_path = "
                     << (spec.table_path.empty() ? "builtin" : spec.table_path.string()) << "\n";
            manifest << "# ---- scenario ----\n" << scenario.to_document();
            manifest << "# ---- table ----\n" << table.to_document();
            write_file(spec.out_dir / "manifest.txt", manifest.str());
        }

        for (const Scheme scheme : expand_schemes(spec.scheme)) {
            const std::string name{scheme_name(scheme)};
            std::vector<TradeoffPoint> points;
            if (scheme == Scheme::variable) {
                const RegionGrid grid = build_sweep_grid(scenario, table, config);
                {
                    std::ostringstream out;
                    write_grid_csv(grid, out);
                    write_file(spec.out_dir / "grid_variable.csv", out.str());
                }
                points = sweep_variable_with_grid(grid, scenario, reqs, config);
                for (std::size_t i = 0; i < points.size(); ++i) {
                    std::ostringstream note;
                    note.precision(17);
                    note << "k1_req = " << points[i].k1_req << ", seed = " << config.seed
                         << ", rays = " << config.rays << ", products = " << config.products;
                    std::ostringstream out;
                    write_policy_csv(points[i].policy, &grid, out, note.str());
                    write_file(spec.out_dir / ("policy_variable_" + std::to_string(i) + ".csv"),
                               out.str());
                }
            } else {
                points = sweep_tradeoff(scheme, scenario, table, reqs, config);
                if (scheme == Scheme::constant) {
                    for (std::size_t i = 0; i < points.size(); ++i) {
                        std::ostringstream note;
                        note.precision(17);
                        note << "k1_req = " << points[i].k1_req << ", seed = " << config.seed;
                        std::ostringstream out;
                        write_policy_csv(points[i].policy, nullptr, out, note.str());
                        write_file(spec.out_dir / ("policy_constant_" + std::to_string(i) + ".csv"),
                                   out.str());
                    }
                }
            }
            std::ostringstream out;
            write_report_csv(points, name, out);
            write_file(spec.out_dir / ("curve_" + name + ".csv"), out.str());
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "crlink: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace crlink
