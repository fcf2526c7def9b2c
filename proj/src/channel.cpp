#include "crlink/channel.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace crlink {

void Scenario::validate() const {
    if (s11_mean <= 0 || s12_mean <= 0 || s21_mean <= 0 || s22_mean <= 0)
        throw std::invalid_argument("scenario: mean gains must be positive");
    if (noise_power <= 0) throw std::invalid_argument("scenario: noise power must be positive");
    if (primary_power <= 0) throw std::invalid_argument("scenario: primary power must be positive");
    if (cognitive_power_budget < 0)
        throw std::invalid_argument("scenario: cognitive power budget must be non-negative");
    if (required_primary_ase < 0)
        throw std::invalid_argument("scenario: required primary spectral efficiency must be non-negative");
    ber_targets.validate();
    if (underlay_pth && *underlay_pth < 0)
        throw std::invalid_argument("scenario: underlay_pth must be non-negative");
    if (tdma_tau && (*tdma_tau < 0 || *tdma_tau > 1))
        throw std::invalid_argument("scenario: tdma_tau must lie in [0,1]");
}

Scenario Scenario::parse(std::string_view text) {
    std::map<std::string, double> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::istringstream rest(line);
            std::string tok;
            if (rest >> tok)
                throw std::invalid_argument("scenario: line " + std::to_string(lineno) +
                                            ": expected `key = value`");
            continue;
        }
        std::istringstream key_in(line.substr(0, eq)), val_in(line.substr(eq + 1));
        std::string key, extra;
        double value = 0;
        if (!(key_in >> key) || key_in >> extra || !(val_in >> value) || val_in >> extra)
            throw std::invalid_argument("scenario: line " + std::to_string(lineno) +
                                        ": expected `key = value`");
        if (kv.count(key))
            throw std::invalid_argument("scenario: duplicate key `" + key + "`");
        kv[key] = value;
    }

    Scenario s;
    auto take = [&kv](const char* key, double& field) {
        auto it = kv.find(key);
        if (it != kv.end()) {
            field = it->second;
            kv.erase(it);
        }
    };

    const bool has_pathloss = kv.count("pathloss_d") || kv.count("pathloss_e");
    const bool has_means = kv.count("s11_mean") || kv.count("s12_mean") || kv.count("s21_mean") ||
                           kv.count("s22_mean");
    if (has_pathloss && has_means)
        throw std::invalid_argument("scenario: give either mean gains or pathloss_d/pathloss_e, not both");
    if (has_pathloss) {
        PathLossGeometry geo;
        take("pathloss_e", geo.exponent);
        take("pathloss_d", geo.tx_separation);
        if (geo.exponent <= 0) throw std::invalid_argument("scenario: pathloss_e must be positive");
        apply_pathloss(s, geo);
    } else {
        take("s11_mean", s.s11_mean);
        take("s12_mean", s.s12_mean);
        take("s21_mean", s.s21_mean);
        take("s22_mean", s.s22_mean);
    }
    take("n0", s.noise_power);
    take("p1", s.primary_power);
    take("p2_budget", s.cognitive_power_budget);
    take("b1", s.ber_targets.primary);
    take("b2", s.ber_targets.cognitive);
    take("design_margin", s.ber_targets.design_margin);
    take("k1_required", s.required_primary_ase);
    if (auto it = kv.find("underlay_pth"); it != kv.end()) {
        s.underlay_pth = it->second;
        kv.erase(it);
    }
    if (auto it = kv.find("tdma_tau"); it != kv.end()) {
        s.tdma_tau = it->second;
        kv.erase(it);
    }
    if (!kv.empty())
        throw std::invalid_argument("scenario: unknown key `" + kv.begin()->first + "`");
    s.validate();
    return s;
}

Scenario Scenario::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("scenario: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string Scenario::to_document() const {
    std::ostringstream out;
    out.precision(17);
    out << "s11_mean = " << s11_mean << "\n"
        << "s12_mean = " << s12_mean << "\n"
        << "s21_mean = " << s21_mean << "\n"
        << "s22_mean = " << s22_mean << "\n"
        << "n0 = " << noise_power << "\n"
        << "p1 = " << primary_power << "\n"
        << "p2_budget = " << cognitive_power_budget << "\n"
        << "b1 = " << ber_targets.primary << "\n"
        << "b2 = " << ber_targets.cognitive << "\n"
        << "design_margin = " << ber_targets.design_margin << "\n"
        << "k1_required = " << required_primary_ase << "\n";
    if (underlay_pth) out << "underlay_pth = " << *underlay_pth << "\n";
    if (tdma_tau) out << "tdma_tau = " << *tdma_tau << "\n";
    return out.str();
}

FadingSample sample_block(const Scenario& scenario, Rng& rng) {
    auto draw = [&rng](double mean) {
        double g;
        do {
            g = rng.exponential(mean);
        } while (g <= 0.0);
        return g;
    };
    FadingSample sample;
    sample.s11 = draw(scenario.s11_mean);
    sample.s12 = draw(scenario.s12_mean);
    sample.s21 = draw(scenario.s21_mean);
    sample.s22 = draw(scenario.s22_mean);
    return sample;
}

SnirPair snir(const FadingSample& sample, double p1, double p2, double n0) {
    if (p1 <= 0) throw std::invalid_argument("snir: primary power must be positive");
    if (p2 < 0) throw std::invalid_argument("snir: cognitive power must be non-negative");
    if (n0 <= 0) throw std::invalid_argument("snir: noise power must be positive");
    SnirPair out;
    out.primary = p1 * sample.s11 / (p2 * sample.s21 + n0);
    out.cognitive = p2 * sample.s22 / (p1 * sample.s12 + n0);
    return out;
}

ScaledSnir scaled_snirs(const FadingSample& sample) {
    if (sample.s21 <= 0 || sample.s12 <= 0)
        throw std::invalid_argument("scaled_snirs: cross gains must be positive");
    return {sample.s11 / sample.s21, sample.s22 / sample.s12};
}

std::array<double, 4> pathloss_means(const PathLossGeometry& geometry) {
    if (geometry.exponent <= 0) throw std::invalid_argument("pathloss: exponent must be positive");
    const double d2 = geometry.tx_separation * geometry.tx_separation;
    const double cross = std::pow(1.0 + d2, -geometry.exponent / 2.0);
    return {1.0, cross, cross, 1.0};
}

void apply_pathloss(Scenario& scenario, const PathLossGeometry& geometry) {
    const auto means = pathloss_means(geometry);
    scenario.s11_mean = means[0];
    scenario.s12_mean = means[1];
    scenario.s21_mean = means[2];
    scenario.s22_mean = means[3];
}

}  // namespace crlink
