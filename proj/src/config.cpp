#include "uaveh/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <variant>

namespace uaveh {

double ScenarioConfig::tier_height(int j) const {
    return j == 0 ? heights.at(static_cast<std::size_t>(cluster_tier - 1))
                  : heights.at(static_cast<std::size_t>(j - 1));
}

double ScenarioConfig::tier_density(int j) const {
    return j == 0 ? 0.0 : tier_densities.at(static_cast<std::size_t>(j - 1));
}

double ScenarioConfig::tier_power_w(int j) const {
    return dbm_to_watts(tx_power_dbm.at(static_cast<std::size_t>(j)));
}

double ScenarioConfig::energy_threshold_w() const { return dbm_to_watts(energy_threshold_dbm); }

void ScenarioConfig::validate() const {
    auto fail = [](const char* field, const std::string& msg) { throw ConfigValidationError(field, msg); };
    if (!(uav_density > 0.0) || !std::isfinite(uav_density)) fail("uav_density", "must be > 0");
    if (!(cluster_sigma > 0.0) || !std::isfinite(cluster_sigma)) fail("cluster_sigma", "must be > 0");
    if (heights.empty()) fail("heights", "at least one height group is required");
    for (double h : heights) {
        if (!(h >= 1.0) || !std::isfinite(h)) fail("heights", "every height must be >= 1 m");
    }
    if (tier_densities.size() != heights.size()) {
        fail("tier_densities", "needs one entry per height group");
    }
    double sum = 0.0;
    for (double l : tier_densities) {
        if (!(l > 0.0) || !std::isfinite(l)) fail("tier_densities", "every density must be > 0");
        sum += l;
    }
    if (std::abs(sum - uav_density) > 1e-12 * uav_density) {
        fail("tier_densities", "must sum to uav_density");
    }
    if (tx_power_dbm.size() != heights.size() + 1) {
        fail("tx_power_dbm", "needs one entry per tier plus the cluster-center UAV");
    }
    for (double p : tx_power_dbm) {
        if (!std::isfinite(p)) fail("tx_power_dbm", "must be finite");
    }
    if (!(alphas.los >= 2.0)) fail("alpha_los", "must be >= 2");
    if (!(alphas.nlos >= alphas.los) || !std::isfinite(alphas.nlos)) fail("alpha_nlos", "must be >= alpha_los");
    if (los_model.kind == LosModelKind::HighAltitude) {
        if (!(los_model.b > 0.0)) fail("los_b", "must be > 0");
        if (!(los_model.c > 0.0)) fail("los_c", "must be > 0");
    }
    if (!std::isfinite(energy_threshold_dbm)) fail("energy_threshold_dbm", "must be finite");
    if (!(rectifier_efficiency > 0.0 && rectifier_efficiency <= 1.0)) {
        fail("rectifier_efficiency", "must lie in (0, 1]");
    }
    if (alzer_terms < 1) fail("alzer_terms", "must be >= 1");
    if (!(quadrature_rel_tol > 1e-11 && quadrature_rel_tol < 1e-2)) {
        fail("quadrature_rel_tol", "must lie in (1e-11, 1e-2)");
    }
    if (cluster_tier < 1 || cluster_tier > num_tiers()) fail("cluster_tier", "must index a height group");
    if (mc_trials < 1) fail("mc_trials", "must be >= 1");
    if (!(mc_window_radius_m > 0.0) || !std::isfinite(mc_window_radius_m)) {
        fail("mc_window_radius_m", "must be > 0");
    }
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

ScenarioConfig default_config() { return ScenarioConfig{}; }

ScenarioConfig multi_height_preset() {
    ScenarioConfig c;
    c.heights = {50.0, 80.0};
    c.tier_densities = {0.5 * c.uav_density, 0.5 * c.uav_density};
    c.tx_power_dbm = {37.0, 37.0, 37.0};
    return c;
}

namespace {

using Value = std::variant<double, std::string, std::vector<double>>;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<double> parse_number(std::string_view s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return v;
}

Value parse_value(const std::string& raw, int line_no) {
    auto bad = [&](const std::string& msg) {
        throw ConfigParseError("line " + std::to_string(line_no) + ": " + msg);
    };
    if (raw.empty()) bad("missing value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') bad("unterminated string");
        return raw.substr(1, raw.size() - 2);
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') bad("unterminated list");
        std::vector<double> out;
        const std::string body = trim(std::string_view(raw).substr(1, raw.size() - 2));
        if (body.empty()) return out;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto v = parse_number(trim(item));
            if (!v) bad("list element '" + trim(item) + "' is not a number");
            out.push_back(*v);
        }
        return out;
    }
    auto v = parse_number(raw);
    if (!v) bad("value '" + raw + "' is not a number, quoted string or list");
    return *v;
}

double as_number(const Value& v, const std::string& key) {
    if (auto p = std::get_if<double>(&v)) return *p;
    throw ConfigParseError(key + ": expected a number");
}

long as_integer(const Value& v, const std::string& key) {
    const double d = as_number(v, key);
    if (d != std::floor(d) || std::abs(d) > 9.0e15) throw ConfigParseError(key + ": expected an integer");
    return static_cast<long>(d);
}

std::string as_string(const Value& v, const std::string& key) {
    if (auto p = std::get_if<std::string>(&v)) return *p;
    throw ConfigParseError(key + ": expected a quoted string");
}

std::vector<double> as_list(const Value& v, const std::string& key) {
    if (auto p = std::get_if<std::vector<double>>(&v)) return *p;
    if (auto p = std::get_if<double>(&v)) return {*p};
    throw ConfigParseError(key + ": expected a number or a list of numbers");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_list(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += format_double(xs[i]);
    }
    return out + "]";
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    std::map<std::string, Value> entries;
    std::map<std::string, std::string> raw_values;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // Strip comments that are not inside a quoted string.
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line.resize(i);
                break;
            }
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string raw = trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty()) throw ConfigParseError("line " + std::to_string(line_no) + ": empty key");
        if (entries.count(key)) {
            throw ConfigParseError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        entries.emplace(key, parse_value(raw, line_no));
        raw_values.emplace(key, raw);
    }

    ScenarioConfig c;
    auto take = [&](const char* key) -> std::optional<Value> {
        auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        Value v = std::move(it->second);
        entries.erase(it);
        return v;
    };

    const auto density = take("uav_density");
    const auto tiers = take("tier_densities");
    const auto heights = take("heights");
    const auto powers = take("tx_power_dbm");

    if (heights) {
        c.heights = as_list(*heights, "heights");
    } else if (tiers) {
        c.heights.assign(as_list(*tiers, "tier_densities").size(), 50.0);
    }
    const std::size_t groups = c.heights.size();
    if (density) c.uav_density = as_number(*density, "uav_density");
    if (tiers) {
        c.tier_densities = as_list(*tiers, "tier_densities");
        if (!density) {
            c.uav_density = std::accumulate(c.tier_densities.begin(), c.tier_densities.end(), 0.0);
        }
    } else {
        c.tier_densities.assign(groups, c.uav_density / static_cast<double>(groups));
    }
    if (powers) {
        c.tx_power_dbm = as_list(*powers, "tx_power_dbm");
        if (c.tx_power_dbm.size() == 1) c.tx_power_dbm.assign(groups + 1, c.tx_power_dbm.front());
    } else {
        c.tx_power_dbm.assign(groups + 1, 37.0);
    }

    if (auto v = take("cluster_sigma")) c.cluster_sigma = as_number(*v, "cluster_sigma");
    if (auto v = take("alpha_los")) c.alphas.los = as_number(*v, "alpha_los");
    if (auto v = take("alpha_nlos")) c.alphas.nlos = as_number(*v, "alpha_nlos");
    if (auto v = take("los_model")) {
        try {
            c.los_model.kind = parse_los_model(as_string(*v, "los_model"));
        } catch (const std::invalid_argument& e) {
            throw ConfigParseError(std::string("los_model: ") + e.what());
        }
    }
    if (auto v = take("los_b")) c.los_model.b = as_number(*v, "los_b");
    if (auto v = take("los_c")) c.los_model.c = as_number(*v, "los_c");
    if (auto v = take("orientation")) {
        try {
            c.orientation = parse_orientation(as_string(*v, "orientation"));
        } catch (const std::invalid_argument& e) {
            throw ConfigParseError(std::string("orientation: ") + e.what());
        }
    }
    if (auto v = take("energy_threshold_dbm")) c.energy_threshold_dbm = as_number(*v, "energy_threshold_dbm");
    if (auto v = take("rectifier_efficiency")) c.rectifier_efficiency = as_number(*v, "rectifier_efficiency");
    if (auto v = take("alzer_terms")) c.alzer_terms = static_cast<int>(as_integer(*v, "alzer_terms"));
    if (auto v = take("quadrature_rel_tol")) c.quadrature_rel_tol = as_number(*v, "quadrature_rel_tol");
    if (auto v = take("cluster_tier")) c.cluster_tier = static_cast<int>(as_integer(*v, "cluster_tier"));
    if (auto v = take("mc_trials")) c.mc_trials = as_integer(*v, "mc_trials");
    if (auto v = take("mc_window_radius_m")) c.mc_window_radius_m = as_number(*v, "mc_window_radius_m");
    if (take("rng_seed")) {
        const std::string& raw = raw_values.at("rng_seed");
        std::uint64_t seed = 0;
        auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), seed);
        if (ec != std::errc() || ptr != raw.data() + raw.size()) {
            throw ConfigParseError("rng_seed: expected a non-negative integer");
        }
        c.rng_seed = seed;
    }

    if (!entries.empty()) throw ConfigParseError("unknown key '" + entries.begin()->first + "'");

    c.validate();
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigIoError("cannot open config file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string to_config_text(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "uav_density = " << format_double(c.uav_density) << "  # 1/m^2\n"
        << "cluster_sigma = " << format_double(c.cluster_sigma) << "  # m\n"
        << "heights = " << format_list(c.heights) << "  # m\n"
        << "tier_densities = " << format_list(c.tier_densities) << "  # 1/m^2\n"
        << "tx_power_dbm = " << format_list(c.tx_power_dbm) << "\n"
        << "alpha_los = " << format_double(c.alphas.los) << "\n"
        << "alpha_nlos = " << format_double(c.alphas.nlos) << "\n"
        << "los_model = \"" << to_string(c.los_model.kind) << "\"\n"
        << "los_b = " << format_double(c.los_model.b) << "\n"
        << "los_c = " << format_double(c.los_model.c) << "\n"
        << "orientation = \"" << to_string(c.orientation) << "\"\n"
        << "energy_threshold_dbm = " << format_double(c.energy_threshold_dbm) << "\n"
        << "rectifier_efficiency = " << format_double(c.rectifier_efficiency) << "\n"
        << "alzer_terms = " << c.alzer_terms << "\n"
        << "quadrature_rel_tol = " << format_double(c.quadrature_rel_tol) << "\n"
        << "cluster_tier = " << c.cluster_tier << "\n"
        << "mc_trials = " << c.mc_trials << "\n"
        << "mc_window_radius_m = " << format_double(c.mc_window_radius_m) << "\n"
        << "rng_seed = " << c.rng_seed << "\n";
    return out.str();
}

void set_total_density(ScenarioConfig& config, double density) {
    const double scale = density / config.uav_density;
    for (double& l : config.tier_densities) l *= scale;
    config.uav_density = density;
    // Re-normalize so the sum invariant holds to rounding.
    const double sum = std::accumulate(config.tier_densities.begin(), config.tier_densities.end(), 0.0);
    config.tier_densities.back() += density - sum;
}

void set_all_powers_dbm(ScenarioConfig& config, double dbm) {
    config.tx_power_dbm.assign(config.heights.size() + 1, dbm);
}

void set_single_height(ScenarioConfig& config, double height) {
    config.heights = {height};
    config.tier_densities = {config.uav_density};
    config.tx_power_dbm.resize(2, config.tx_power_dbm.front());
    config.cluster_tier = 1;
}

}  // namespace uaveh
