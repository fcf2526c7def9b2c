#include <CLI11.hpp>

#include <string>

#include "crlink/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Link adaptation simulator for spectrum-sharing cognitive radios"};

    crlink::RunSpec spec;
    std::string k1_req_text;
    std::string scenario_path, table_path, out_dir = "out";

    app.add_option("--scenario", scenario_path, "Scenario document (default: built-in template)");
    app.add_option("--table", table_path, "AMC mode table document (default: shipped table)");
    app.add_option("--scheme", spec.scheme, "variable|constant|underlay|interweave|all")
        ->capture_default_str();
    app.add_option("--k1-req", k1_req_text,
                   "Primary requirement sweep: `first:last:step` or comma list");
    app.add_option("--rays", spec.rays, "Ray sectors (L)")->capture_default_str();
    app.add_option("--products", spec.products, "Product bands (C)")->capture_default_str();
    app.add_option("--regions", spec.regions,
                   "Region-count target; overrides --rays/--products when set");
    app.add_option("--mc-samples", spec.mc_samples, "Design-side Monte Carlo samples")
        ->capture_default_str();
    app.add_option("--blocks", spec.n_blocks, "Measurement blocks per sweep point")
        ->capture_default_str();
    app.add_option("--seed", spec.seed, "Master seed")->capture_default_str();
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_flag("--emit-defaults", spec.emit_defaults,
                 "Print the shipped mode table and a scenario template, then exit");

    CLI11_PARSE(app, argc, argv);

    spec.scenario_path = scenario_path;
    spec.table_path = table_path;
    spec.out_dir = out_dir;
    if (!k1_req_text.empty()) {
        try {
            spec.k1_reqs = crlink::parse_k1_req(k1_req_text);
        } catch (const std::exception& e) {
            std::cerr << "crlink: " << e.what() << '\n';
            return 1;
        }
    }
    return crlink::run(spec);
}
