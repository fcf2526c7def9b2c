#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace crlink {

/// Batch run description, mirroring the CLI flags. Empty paths select the
/// shipped defaults; flags override scenario-document values.
struct RunSpec {
    std::filesystem::path scenario_path;  // empty: built-in template
    std::filesystem::path table_path;     // empty: shipped default table
    std::string scheme = "variable";      // variable|constant|underlay|interweave|all
    std::vector<double> k1_reqs;          // empty: the scenario's k1_required
    int rays = 2;
    int products = 50;
    int regions = 0;  // region-count target; 0 keeps rays/products as given
    std::int64_t mc_samples = 200000;
    std::int64_t n_blocks = 200000;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = "out";
    bool emit_defaults = false;
};

/// Parse `a:b:step` ranges or comma-separated lists of requirements.
std::vector<double> parse_k1_req(const std::string& text);

/// Execute the run: write per-scheme tradeoff CSVs, grid and policy
/// dumps, and a manifest under out_dir. Returns a process exit status;
/// infeasible sweep points are flagged rows, not failures.
int run(const RunSpec& spec);

}  // namespace crlink
