#include "crlink/amc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace crlink {

double ber(double gamma, const AmcMode& mode) {
    if (mode.index < 1) throw std::invalid_argument("ber: mode 0 transmits nothing");
    if (gamma < 0.0) throw std::invalid_argument("ber: negative SNIR");
    return mode.coeff * std::exp(-mode.decay * gamma);
}

double snir_threshold(const AmcMode& mode, double target) {
    if (mode.index < 1) throw std::invalid_argument("snir_threshold: mode 0 has no threshold");
    if (target <= 0.0) throw std::invalid_argument("snir_threshold: target must be positive");
    if (target > mode.coeff) {
        std::ostringstream msg;
        msg << "snir_threshold: target " << target << " above curve level " << mode.coeff
            << " of mode " << mode.index;
        throw std::invalid_argument(msg.str());
    }
    return -std::log(target / mode.coeff) / mode.decay;
}

namespace {

void validate_modes(const std::vector<AmcMode>& modes) {
    if (modes.size() < 2) throw std::invalid_argument("amc table: need mode 0 plus at least one mode");
    const auto& zero = modes.front();
    if (zero.index != 0 || zero.rate != 0.0)
        throw std::invalid_argument("amc table: first mode must be the rate-0 outage mode");
    for (std::size_t n = 0; n < modes.size(); ++n) {
        if (modes[n].index != static_cast<int>(n))
            throw std::invalid_argument("amc table: mode indices must be consecutive from 0");
    }
    for (std::size_t n = 1; n < modes.size(); ++n) {
        if (modes[n].rate <= modes[n - 1].rate) {
            std::ostringstream msg;
            msg << "amc table: rates must be strictly increasing, mode " << n << " has rate "
                << modes[n].rate << " after " << modes[n - 1].rate;
            throw std::invalid_argument(msg.str());
        }
        if (modes[n].coeff <= 0.0 || modes[n].decay <= 0.0)
            throw std::invalid_argument("amc table: curve constants must be positive");
    }

    // Threshold ordering for every target B <= min coeff. For adjacent
    // modes the threshold gap is monotone in ln(1/B), so it is enough
    // that decays do not increase and that the gap is positive at the
    // largest admissible target B = min coeff.
    double min_coeff = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n < modes.size(); ++n) min_coeff = std::min(min_coeff, modes[n].coeff);
    for (std::size_t n = 2; n < modes.size(); ++n) {
        if (modes[n].decay > modes[n - 1].decay) {
            std::ostringstream msg;
            msg << "amc table: decay must not increase with rate (modes " << n - 1 << " -> " << n
                << "), thresholds would cross at small targets";
            throw std::invalid_argument(msg.str());
        }
        const double lo = snir_threshold(modes[n - 1], min_coeff);
        const double hi = snir_threshold(modes[n], min_coeff);
        if (hi <= lo) {
            std::ostringstream msg;
            msg << "amc table: SNIR thresholds invert between modes " << n - 1 << " and " << n
                << " at target " << min_coeff;
            throw std::invalid_argument(msg.str());
        }
    }
}

}  // namespace

AmcTable::AmcTable(std::vector<AmcMode> modes) : modes_(std::move(modes)) {
    validate_modes(modes_);
}

AmcTable AmcTable::parse(std::string_view text) {
    std::vector<AmcMode> modes;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string idx_tok, rate_tok, coeff_tok, decay_tok;
        if (!(fields >> idx_tok)) continue;  // blank line
        if (!(fields >> rate_tok >> coeff_tok >> decay_tok)) {
            throw std::invalid_argument("amc table: line " + std::to_string(lineno) +
                                        ": expected `index rate coeff decay`");
        }
        std::string extra;
        if (fields >> extra)
            throw std::invalid_argument("amc table: line " + std::to_string(lineno) + ": trailing fields");
        AmcMode mode;
        try {
            mode.index = std::stoi(idx_tok);
            mode.rate = std::stod(rate_tok);
            if (mode.index == 0) {
                if (coeff_tok != "-" || decay_tok != "-")
                    throw std::invalid_argument("mode 0 carries no constants, write `0 0 - -`");
            } else {
                mode.coeff = std::stod(coeff_tok);
                mode.decay = std::stod(decay_tok);
            }
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("amc table: line " + std::to_string(lineno) + ": " + e.what());
        }
        modes.push_back(mode);
    }
    return AmcTable(std::move(modes));
}

AmcTable AmcTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("amc table: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string AmcTable::to_document() const {
    std::ostringstream out;
    out << "# index rate coeff decay\n";
    out << "0 0 - -\n";
    out.precision(12);
    for (std::size_t n = 1; n < modes_.size(); ++n) {
        out << modes_[n].index << ' ' << modes_[n].rate << ' ' << modes_[n].coeff << ' '
            << modes_[n].decay << '\n';
    }
    return out.str();
}

const AmcMode& select_mode(double gamma, const AmcTable& table, double target) {
    if (gamma < 0.0) throw std::invalid_argument("select_mode: negative SNIR");
    int best = 0;
    for (int n = 1; n <= table.top_mode(); ++n) {
        if (snir_threshold(table.mode(n), target) <= gamma)
            best = n;
        else
            break;  // thresholds increase with n
    }
    return table.mode(best);
}

ThresholdSet::ThresholdSet(const AmcTable& table, double target) {
    nu_.resize(table.size());
    nu_[0] = 0.0;
    for (int n = 1; n <= table.top_mode(); ++n) nu_[static_cast<std::size_t>(n)] = snir_threshold(table.mode(n), target);
    for (std::size_t n = 2; n < nu_.size(); ++n) {
        if (nu_[n] <= nu_[n - 1])
            throw std::invalid_argument("threshold set: thresholds not strictly increasing at this target");
    }
}

int ThresholdSet::select(double gamma) const {
    // Highest n with nu_[n] <= gamma; intervals [nu_n, nu_{n+1}).
    const auto it = std::upper_bound(nu_.begin() + 1, nu_.end(), gamma);
    return static_cast<int>(it - nu_.begin()) - 1;
}

double ThresholdSet::threshold(int n) const {
    if (n <= top_mode()) return nu_.at(static_cast<std::size_t>(n));
    return std::numeric_limits<double>::infinity();
}

int select_by_thresholds(std::span<const double> thresholds, double gamma) {
    const auto it = std::upper_bound(thresholds.begin() + 1, thresholds.end(), gamma);
    return static_cast<int>(it - thresholds.begin()) - 1;
}

std::pair<double, double> fit_mode_constants(std::span<const std::pair<double, double>> samples) {
    if (samples.size() < 2) throw std::invalid_argument("fit_mode_constants: need at least 2 samples");
    double min_g = samples.front().first, max_g = samples.front().first;
    for (const auto& [gamma, b] : samples) {
        if (b <= 0.0 || b >= 1.0) throw std::invalid_argument("fit_mode_constants: ber outside (0,1)");
        min_g = std::min(min_g, gamma);
        max_g = std::max(max_g, gamma);
    }
    if (min_g == max_g) throw std::invalid_argument("fit_mode_constants: gammas must not all coincide");

    // Least squares on ln(ber) = ln(coeff) - decay * gamma.
    const double n = static_cast<double>(samples.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [gamma, b] : samples) {
        const double y = std::log(b);
        sx += gamma;
        sy += y;
        sxx += gamma * gamma;
        sxy += gamma * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    const double decay = -slope;
    if (decay <= 0.0) throw std::runtime_error("fit_mode_constants: fitted decay is not positive");
    return {std::exp(intercept), decay};
}

void BerTargets::validate() const {
    if (primary <= 0.0 || primary >= 1.0 || cognitive <= 0.0 || cognitive >= 1.0)
        throw std::invalid_argument("ber targets: targets must lie in (0,1)");
    if (design_margin < 1.0)
        throw std::invalid_argument("ber targets: design margin must be >= 1");
}

}  // namespace crlink
