#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace crlink {

/// One transmission mode of an adaptive modulation and coding ladder.
/// The BER of mode n at linear SNIR gamma is modeled as
///     coeff * exp(-decay * gamma).
/// Mode 0 is the outage mode: rate 0, no transmission, no curve constants.
struct AmcMode {
    int index = 0;
    double rate = 0.0;   // bits/s/Hz
    double coeff = 0.0;  // curve level at gamma = 0
    double decay = 0.0;  // curve slope in the log domain
};

/// Modeled BER of `mode` at linear SNIR `gamma`. Mode 0 carries no curve
/// and is rejected.
double ber(double gamma, const AmcMode& mode);

/// Minimum linear SNIR at which `mode` meets BER `target`:
///     -(1/decay) * ln(target / coeff).
/// Requires 0 < target <= coeff.
double snir_threshold(const AmcMode& mode, double target);

/// Ordered mode table. Validated so that rates are strictly increasing
/// starting from the rate-0 outage mode, and mode SNIR thresholds are
/// strictly increasing for every BER target not above the smallest coeff.
/// Immutable after construction; safe to share across threads.
class AmcTable {
  public:
    explicit AmcTable(std::vector<AmcMode> modes);

    /// Parse the table document format: one `index rate coeff decay` line
    /// per mode, `#` comments, mode 0 written as `0 0 - -`.
    static AmcTable parse(std::string_view text);
    static AmcTable load(const std::filesystem::path& path);

    /// The table shipped with the library (802.11a-style rate ladder).
    static const AmcTable& default_table();
    static std::string_view default_table_document();

    int top_mode() const { return static_cast<int>(modes_.size()) - 1; }
    std::size_t size() const { return modes_.size(); }
    const AmcMode& mode(int n) const { return modes_.at(static_cast<std::size_t>(n)); }
    double rate(int n) const { return mode(n).rate; }
    double max_rate() const { return modes_.back().rate; }

    auto begin() const { return modes_.begin(); }
    auto end() const { return modes_.end(); }

    std::string to_document() const;

  private:
    std::vector<AmcMode> modes_;
};

/// Highest-rate mode whose SNIR threshold at `target` does not exceed
/// `gamma`; mode 0 when none qualifies. Intervals are closed on the left.
const AmcMode& select_mode(double gamma, const AmcTable& table, double target);

/// Precomputed per-mode thresholds for one BER target, for hot loops.
/// nu(0) = 0, nu(N+1) = +inf, strictly increasing over 1..N.
class ThresholdSet {
  public:
    ThresholdSet(const AmcTable& table, double target);

    /// Mode index selected at linear SNIR `gamma`.
    int select(double gamma) const;
    double threshold(int n) const;
    int top_mode() const { return static_cast<int>(nu_.size()) - 1; }

  private:
    std::vector<double> nu_;  // nu_[n] for n = 0..N
};

/// Highest mode index whose threshold fits under `gamma`, given the
/// per-mode threshold array with entry 0 == 0.
int select_by_thresholds(std::span<const double> thresholds, double gamma);

/// Least-squares fit of ln(ber) = ln(coeff) - decay * gamma over (gamma,
/// ber) samples. Returns (coeff, decay); rejects non-physical fits.
std::pair<double, double> fit_mode_constants(std::span<const std::pair<double, double>> samples);

/// Application BER requirements plus the design margin. Design-time mode
/// selection and power inversion use the tightened targets B/margin; the
/// plain targets are what evaluation checks against.
struct BerTargets {
    double primary = 1e-3;     // B1
    double cognitive = 1e-3;   // B2
    double design_margin = 10.0;

    double design_primary() const { return primary / design_margin; }
    double design_cognitive() const { return cognitive / design_margin; }
    void validate() const;
};

}  // namespace crlink
