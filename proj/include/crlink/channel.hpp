#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "crlink/amc.hpp"
#include "crlink/rng.hpp"

namespace crlink {

/// Channel statistics and link budgets for one primary/cognitive pair.
/// Gains are mean power gains of the four Tx_i -> Rx_j paths. The fading
/// family is Rayleigh, i.e. power gains are exponential with these means;
/// no other family is supported.
struct Scenario {
    double s11_mean = 1.0;   // primary Tx -> primary Rx
    double s12_mean = 0.05;  // primary Tx -> cognitive Rx
    double s21_mean = 0.05;  // cognitive Tx -> primary Rx
    double s22_mean = 1.0;   // cognitive Tx -> cognitive Rx
    double noise_power = 1e-4;
    double primary_power = 1.0;
    double cognitive_power_budget = 0.5;
    BerTargets ber_targets;
    double required_primary_ase = 0.0;  // bits/s/Hz

    // Optional baseline knobs carried by the scenario document.
    std::optional<double> underlay_pth;
    std::optional<double> tdma_tau;

    void validate() const;

    /// Parse `key = value` lines; `#` comments. Mean gains may instead be
    /// given as `pathloss_d` / `pathloss_e`.
    static Scenario parse(std::string_view text);
    static Scenario load(const std::filesystem::path& path);
    std::string to_document() const;
};

/// Power gains of the four paths for one fading block.
struct FadingSample {
    double s11 = 0, s12 = 0, s21 = 0, s22 = 0;
};

/// Interference-dominated SNIRs with powers factored out:
/// alpha = s11/s21 (primary), beta = s22/s12 (cognitive).
struct ScaledSnir {
    double alpha = 0, beta = 0;
};

struct SnirPair {
    double primary = 0, cognitive = 0;
};

/// Transceiver geometry on a normalized rectangle: direct distances 1,
/// cross distances sqrt(1 + d^2) with d the Tx separation.
struct PathLossGeometry {
    double exponent = 3.0;       // path-loss exponent
    double tx_separation = 1.0;  // d
};

/// Draw the four independent exponential gains for one block. Gains that
/// underflow to exactly zero are redrawn so scaled SNIRs stay defined.
FadingSample sample_block(const Scenario& scenario, Rng& rng);

/// SNIR of both receivers at transmit powers (p1, p2), noise n0.
SnirPair snir(const FadingSample& sample, double p1, double p2, double n0);

ScaledSnir scaled_snirs(const FadingSample& sample);

/// Mean gains {s11, s12, s21, s22} induced by the path-loss geometry.
std::array<double, 4> pathloss_means(const PathLossGeometry& geometry);

/// Replace the scenario's mean gains by the geometry-derived ones.
void apply_pathloss(Scenario& scenario, const PathLossGeometry& geometry);

}  // namespace crlink
