#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gibbsquad/common.hpp"
#include "gibbsquad/gibbs.hpp"
#include "gibbsquad/kernels.hpp"
#include "gibbsquad/targets.hpp"

namespace gibbsquad {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// name(key=value,key=value); values stay strings until typed access.
struct CallSpec {
    std::string name;
    std::map<std::string, std::string> args;

    double get_num(const std::string& key, double fallback) const {
        auto it = args.find(key);
        if (it == args.end()) return fallback;
        try {
            return std::stod(it->second);
        } catch (...) {
            throw ConfigError("bad numeric value for '" + key + "': " + it->second);
        }
    }
    double require_num(const std::string& key) const {
        if (!args.count(key)) throw ConfigError("missing argument '" + key + "' in " + name + "(...)");
        return get_num(key, 0.0);
    }
    std::string get_str(const std::string& key, const std::string& fallback) const {
        auto it = args.find(key);
        return it == args.end() ? fallback : it->second;
    }
};

inline CallSpec parse_call(const std::string& text) {
    const auto open = text.find('(');
    CallSpec spec;
    if (open == std::string::npos) {
        spec.name = trim(text);
        return spec;
    }
    if (text.back() != ')') throw ConfigError("expected name(...) syntax: " + text);
    spec.name = trim(text.substr(0, open));
    const std::string inner = text.substr(open + 1, text.size() - open - 2);
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value in " + text);
        spec.args[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
    return spec;
}

}  // namespace detail

inline KernelSpec parse_kernel(const std::string& text) {
    const auto c = detail::parse_call(text);
    try {
        if (c.name == "coulomb") return KernelSpec::coulomb(static_cast<int>(c.require_num("d")));
        if (c.name == "coulomb_reg")
            return KernelSpec::coulomb_reg(static_cast<int>(c.require_num("d")), c.require_num("zeta"),
                                           static_cast<long>(c.require_num("n")));
        if (c.name == "riesz") return KernelSpec::riesz(c.require_num("s"), c.require_num("eps"));
        if (c.name == "gaussian") return KernelSpec::gaussian(c.require_num("h"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid kernel: ") + e.what());
    }
    throw ConfigError("unknown kernel '" + c.name + "'");
}

// Training CSV for the logistic posterior: header z1,z2,t.
inline void read_training_csv(const std::string& path, std::vector<Vec>& features,
                              std::vector<int>& labels) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open training data " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty training data " + path);
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        std::stringstream row(line);
        std::string cell;
        Vec z;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() < 2) throw ConfigError("bad training row: " + line);
        for (std::size_t i = 0; i + 1 < cells.size(); ++i) z.push_back(std::stod(cells[i]));
        labels.push_back(std::stoi(cells.back()));
        features.push_back(std::move(z));
    }
}

inline void write_training_csv(const std::string& path, const std::vector<Vec>& features,
                               const std::vector<int>& labels) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "z1,z2,t\n";
    for (std::size_t i = 0; i < features.size(); ++i) {
        for (double c : features[i]) out << format_full(c) << ",";
        out << labels[i] << "\n";
    }
}

inline TargetDensity parse_target(const std::string& text) {
    const auto c = detail::parse_call(text);
    try {
        if (c.name == "trunc_gaussian") {
            const double sigma = c.require_num("sigma");
            return TargetDensity::truncated_gaussian(static_cast<int>(c.require_num("d")), sigma,
                                                     c.get_num("cutoff", 5.0 * sigma));
        }
        if (c.name == "uniform_ball")
            return TargetDensity::uniform_ball(static_cast<int>(c.require_num("d")), c.require_num("R"));
        if (c.name == "logistic") {
            const std::string path = c.get_str("train", "");
            if (path.empty()) throw ConfigError("logistic target needs train=path.csv");
            std::vector<Vec> features;
            std::vector<int> labels;
            read_training_csv(path, features, labels);
            const double prior_sigma = c.require_num("prior_sigma");
            return TargetDensity::logistic_posterior(std::move(features), std::move(labels), prior_sigma,
                                                     c.get_num("prior_cutoff", 5.0 * prior_sigma));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid target: ") + e.what());
    }
    throw ConfigError("unknown target '" + c.name + "'");
}

inline BetaSchedule parse_beta(const std::string& text) {
    const auto c = detail::parse_call(text);
    if (c.name != "power") throw ConfigError("unknown beta schedule '" + c.name + "'");
    try {
        return BetaSchedule(c.get_num("u", 1.0), c.require_num("exp"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid beta schedule: ") + e.what());
    }
}

struct GridSpec {
    double extent = 1.2;  // multiple of the confinement radius
    int pts_per_axis = 20;
};

inline GridSpec parse_grid(const std::string& text) {
    const auto c = detail::parse_call(text);
    if (c.name != "grid") throw ConfigError("unknown grid spec '" + c.name + "'");
    GridSpec g;
    g.extent = c.get_num("extent", 1.2);
    g.pts_per_axis = static_cast<int>(c.get_num("pts_per_axis", 20));
    if (g.extent <= 0.0 || g.pts_per_axis < 2) throw ConfigError("invalid grid spec");
    return g;
}

struct BackgroundSpec {
    enum class Kind { Mcmc, Coulomb };
    Kind kind = Kind::Mcmc;
    long m_atoms = 1000;  // mcmc
    long burn_in = 1000;  // mcmc
    long subsample = 0;   // mcmc, 0 = none
    double R = 1.0;       // coulomb
    long T = 2000;        // coulomb MALA iterations
};

inline BackgroundSpec parse_background(const std::string& text) {
    const auto c = detail::parse_call(text);
    BackgroundSpec b;
    if (c.name == "mcmc") {
        b.kind = BackgroundSpec::Kind::Mcmc;
        b.m_atoms = static_cast<long>(c.get_num("M", 1000));
        b.burn_in = static_cast<long>(c.get_num("burnin", 1000));
        b.subsample = static_cast<long>(c.get_num("subsample", 0));
        if (b.m_atoms < 1 || b.burn_in < 0) throw ConfigError("invalid mcmc background spec");
        return b;
    }
    if (c.name == "coulomb") {
        b.kind = BackgroundSpec::Kind::Coulomb;
        b.R = c.require_num("R");
        b.T = static_cast<long>(c.get_num("T", 2000));
        if (b.R <= 0.0 || b.T < 1) throw ConfigError("invalid coulomb background spec");
        return b;
    }
    throw ConfigError("unknown background '" + c.name + "'");
}

// Flat key = value config with [section] headers and # comments. Keys are
// exposed as "section.key".
class ConfigFile {
  public:
    static ConfigFile load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config " + path);
        ConfigFile cfg;
        std::string line, section;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') throw ConfigError("bad section header: " + line);
                section = detail::trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError("expected key = value: " + line);
            const std::string key = detail::trim(line.substr(0, eq));
            cfg.values_[section.empty() ? key : section + "." + key] = detail::trim(line.substr(eq + 1));
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_num(const std::string& key, double fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            return std::stod(it->second);
        } catch (...) {
            throw ConfigError("bad numeric value for '" + key + "': " + it->second);
        }
    }

    std::vector<long> get_long_list(const std::string& key, std::vector<long> fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::vector<long> out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = detail::trim(item);
            if (!item.empty()) out.push_back(std::stol(item));
        }
        if (out.empty()) throw ConfigError("empty list for '" + key + "'");
        return out;
    }

    std::vector<double> get_num_list(const std::string& key, std::vector<double> fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::vector<double> out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = detail::trim(item);
            if (!item.empty()) out.push_back(std::stod(item));
        }
        if (out.empty()) throw ConfigError("empty list for '" + key + "'");
        return out;
    }

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace gibbsquad
