#include "uaveh/sweep.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "uaveh/montecarlo.hpp"
#include "uaveh/parallel.hpp"

namespace uaveh {

namespace {

constexpr double kZ95 = 1.959963984540054;

double parse_number(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw SweepValidationError("grid: cannot parse number '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::vector<double> range(double a, double b, double step) {
    std::vector<double> g;
    for (int i = 0;; ++i) {
        const double v = a + i * step;
        if (v > b + 1e-9 * std::abs(step)) break;
        g.push_back(v);
    }
    return g;
}

struct Job {
    std::size_t model;
    std::size_t orientation;
    std::size_t variant;
    std::vector<std::size_t> points;  // grid indices covered by this job
    ScenarioConfig config;
    std::vector<double> thresholds_w;
    bool analytic_supported = true;
    std::optional<CoverageResult> analytic;
    std::string mc_key;
};

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header() { out_ << kCsvHeader << '\n'; }

    void row(const std::string& prefix, std::string_view quantity, const std::string& tier, std::string_view state,
             std::string_view engine, double value, double ci, const std::string& flags) {
        out_ << prefix << ',' << quantity << ',' << tier << ',' << state << ',' << engine << ','
             << format_value(value) << ',' << format_value(ci) << ',' << flags << '\n';
        ++rows_;
    }

    std::size_t rows() const { return rows_; }

private:
    std::ostream& out_;
    std::size_t rows_ = 0;
};

std::string join_flags(std::vector<std::string> flags) {
    std::string out;
    for (const auto& f : flags) {
        if (f.empty()) continue;
        if (!out.empty()) out += '|';
        out += f;
    }
    return out;
}

double power_ci_db(double mean_w, double half_w) {
    return mean_w > 0.0 ? 10.0 * std::log10(1.0 + half_w / mean_w) : std::nan("");
}

// Emits every requested quantity of one engine result at one grid point.
void emit_result(CsvWriter& w, const std::string& prefix, std::string_view engine, const CoverageResult* r,
                 std::size_t t, const Quantities& q, const std::string& base_flags, int tiers) {
    const bool mc = engine == "monte_carlo";
    const double nan = std::nan("");
    std::string flags = base_flags;
    if (r == nullptr) flags = join_flags({base_flags, "unsupported"});
    else if (!r->numerics_ok) flags = join_flags({base_flags, "nonconverged"});

    auto tier_label = [](int k) { return std::to_string(k); };

    if (q.association) {
        for (int k = 0; k < tiers; ++k) {
            const auto ki = static_cast<std::size_t>(k);
            for (LinkState s : kLinkStates) {
                w.row(prefix, "association", tier_label(k), to_string(s), engine,
                      r ? r->association[ki][index_of(s)] : nan,
                      r ? (mc ? r->association_ci[ki][index_of(s)] : 0.0) : nan, flags);
            }
            w.row(prefix, "association", tier_label(k), "all", engine, r ? tier_sum(r->association, k) : nan,
                  r ? (mc ? r->association_tier_ci[ki] : 0.0) : nan, flags);
        }
    }
    if (q.avg_power) {
        w.row(prefix, "avg_power_dbm", "all", "all", engine, r ? watts_to_dbm(r->avg_power_total_w) : nan,
              r ? (mc ? power_ci_db(r->avg_power_total_w, r->avg_power_total_ci_w) : 0.0) : nan, flags);
        for (int k = 0; k < tiers; ++k) {
            const double p = r ? r->tier_power_w(k) : nan;
            w.row(prefix, "avg_power_dbm", tier_label(k), "all", engine, r ? watts_to_dbm(p) : nan,
                  r ? (mc ? power_ci_db(p, r->avg_power_tier_ci_w[static_cast<std::size_t>(k)]) : 0.0) : nan,
                  flags);
        }
    }
    if (q.coverage) {
        std::string total_flags = flags;
        if (r && (r->total_coverage_raw[t] < 0.0 || r->total_coverage_raw[t] > 1.0)) {
            total_flags = join_flags({flags, "clamped"});
        }
        w.row(prefix, "coverage", "all", "all", engine, r ? r->total_coverage[t] : nan,
              r ? (mc ? r->total_coverage_ci[t] : 0.0) : nan, total_flags);
        for (int k = 0; k < tiers; ++k) {
            const auto ki = static_cast<std::size_t>(k);
            w.row(prefix, "coverage", tier_label(k), "all", engine, r ? r->tier_coverage(t, k) : nan,
                  r ? (mc ? r->tier_coverage_ci[t][ki] : 0.0) : nan, flags);
        }
        for (int k = 0; k < tiers; ++k) {
            const auto ki = static_cast<std::size_t>(k);
            for (LinkState s : kLinkStates) {
                double value = nan;
                double half = nan;
                if (r) {
                    value = r->conditional_coverage(t, k, s);
                    half = 0.0;
                    if (mc) {
                        const double n_assoc = r->association[ki][index_of(s)] * static_cast<double>(r->trials);
                        half = n_assoc > 0.0 ? kZ95 * std::sqrt(value * (1.0 - value) / n_assoc) : nan;
                    }
                }
                w.row(prefix, "coverage_conditional", tier_label(k), to_string(s), engine, value, half, flags);
            }
        }
    }
}

}  // namespace

std::string_view to_string(SweepParam p) {
    switch (p) {
        case SweepParam::SigmaC: return "sigma_c";
        case SweepParam::Height: return "height";
        case SweepParam::UavDensity: return "uav_density";
        case SweepParam::TxPowerDbm: return "tx_power_dbm";
        case SweepParam::ThresholdDbm: return "threshold_dbm";
    }
    return "?";
}

SweepParam parse_sweep_param(std::string_view name) {
    for (SweepParam p : {SweepParam::SigmaC, SweepParam::Height, SweepParam::UavDensity, SweepParam::TxPowerDbm,
                         SweepParam::ThresholdDbm}) {
        if (to_string(p) == name) return p;
    }
    throw SweepValidationError("unknown sweep parameter '" + std::string(name) +
                               "' (expected sigma_c, height, uav_density, tx_power_dbm, threshold_dbm)");
}

std::vector<double> parse_grid(std::string_view text) {
    std::vector<double> g;
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw SweepValidationError("grid: expected a:b:step");
        const double a = parse_number(parts[0]);
        const double b = parse_number(parts[1]);
        const double step = parse_number(parts[2]);
        if (!(step > 0.0)) throw SweepValidationError("grid: step must be > 0");
        if (b < a) throw SweepValidationError("grid: end below start");
        g = range(a, b, step);
    } else {
        for (auto part : split(text, ',')) g.push_back(parse_number(part));
    }
    if (g.empty()) throw SweepValidationError("grid: empty");
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (!(g[i] > g[i - 1])) throw SweepValidationError("grid: values must be strictly increasing");
    }
    return g;
}

void apply_param(ScenarioConfig& config, SweepParam p, double value) {
    switch (p) {
        case SweepParam::SigmaC: config.cluster_sigma = value; break;
        case SweepParam::Height: set_single_height(config, value); break;
        case SweepParam::UavDensity: set_total_density(config, value); break;
        case SweepParam::TxPowerDbm: set_all_powers_dbm(config, value); break;
        case SweepParam::ThresholdDbm: config.energy_threshold_dbm = value; break;
    }
}

void SweepSpec::validate() const {
    if (grid.empty()) throw SweepValidationError("sweep grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw SweepValidationError("sweep grid must be strictly increasing");
    }
    if (models.empty() || orientations.empty()) throw SweepValidationError("sweep needs a model and an orientation");
    if (!analytic && !monte_carlo) throw SweepValidationError("no engine selected");
    if (!quantities.association && !quantities.avg_power && !quantities.coverage) {
        throw SweepValidationError("no quantity selected");
    }
    if (analytic && !allow_unsupported_analytic) {
        for (Orientation o : orientations) {
            if (o != Orientation::HH) {
                throw SweepValidationError("analytic engine supports only HH orientation (got " +
                                           std::string(to_string(o)) + "); use the monte_carlo engine");
            }
        }
    }
    if (monte_carlo && fixed.mc_trials < 100) throw SweepValidationError("mc_trials must be >= 100");
    const std::size_t nv = std::max<std::size_t>(variants.size(), 1);
    for (const LosModel& m : models) {
        for (std::size_t v = 0; v < nv; ++v) {
            for (double x : grid) {
                ScenarioConfig c = fixed;
                c.los_model = m;
                if (!variants.empty() && variants[v].apply) variants[v].apply(c);
                apply_param(c, param, x);
                c.validate();
            }
        }
    }
}

std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

SweepSummary run_sweep(const SweepSpec& spec, std::ostream& out) {
    spec.validate();
    const std::vector<SweepVariant> variants =
        spec.variants.empty() ? std::vector<SweepVariant>{SweepVariant{"", nullptr}} : spec.variants;
    const bool threshold_sweep = spec.param == SweepParam::ThresholdDbm;

    std::vector<Job> jobs;
    for (std::size_t m = 0; m < spec.models.size(); ++m) {
        for (std::size_t o = 0; o < spec.orientations.size(); ++o) {
            for (std::size_t v = 0; v < variants.size(); ++v) {
                auto make = [&](std::vector<std::size_t> points) {
                    Job j;
                    j.model = m;
                    j.orientation = o;
                    j.variant = v;
                    j.config = spec.fixed;
                    j.config.los_model = spec.models[m];
                    j.config.orientation = spec.orientations[o];
                    if (variants[v].apply) variants[v].apply(j.config);
                    if (threshold_sweep) {
                        for (double g : spec.grid) j.thresholds_w.push_back(dbm_to_watts(g));
                    } else {
                        apply_param(j.config, spec.param, spec.grid[points.front()]);
                        j.thresholds_w = {j.config.energy_threshold_w()};
                    }
                    j.points = std::move(points);
                    j.analytic_supported = j.config.orientation == Orientation::HH;
                    // Monte Carlo does not depend on the analytic-only settings.
                    ScenarioConfig key = j.config;
                    key.alzer_terms = 1;
                    key.quadrature_rel_tol = 1e-7;
                    j.mc_key = to_config_text(key);
                    for (double g : j.thresholds_w) j.mc_key += format_value(g) + ";";
                    jobs.push_back(std::move(j));
                };
                if (threshold_sweep) {
                    std::vector<std::size_t> all(spec.grid.size());
                    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
                    make(all);
                } else {
                    for (std::size_t i = 0; i < spec.grid.size(); ++i) make({i});
                }
            }
        }
    }

    const Quantities& q = spec.quantities;
    std::map<std::string, std::size_t> mc_index;
    std::vector<const Job*> mc_jobs;
    if (spec.monte_carlo) {
        for (const Job& j : jobs) {
            if (mc_index.emplace(j.mc_key, mc_jobs.size()).second) mc_jobs.push_back(&j);
        }
    }
    std::vector<CoverageResult> mc_results(mc_jobs.size());

    // Analytic units first (cheap and internally parallel), then Monte Carlo runs.
    if (spec.analytic) {
        parallel_for(jobs.size(), [&](std::size_t i) {
            Job& j = jobs[i];
            if (!j.analytic_supported) return;
            const AnalyticModel model(j.config);
            j.analytic = analyze(model, {true, q.avg_power, q.coverage ? j.thresholds_w : std::vector<double>{}});
        });
    }
    for (std::size_t i = 0; i < mc_jobs.size(); ++i) {
        const Job& j = *mc_jobs[i];
        mc_results[i] = estimate(j.config, {true, q.avg_power, q.coverage ? j.thresholds_w : std::vector<double>{}});
    }

    CsvWriter w(out);
    w.header();
    SweepSummary summary;
    for (const Job& j : jobs) {
        const int tiers = j.config.num_tiers() + 1;
        const std::string model(to_string(spec.models[j.model].kind));
        const std::string orient(to_string(spec.orientations[j.orientation]));
        const std::string variant_flag = variants[j.variant].tag.empty() ? "" : "variant:" + variants[j.variant].tag;
        for (std::size_t idx = 0; idx < j.points.size(); ++idx) {
            const std::size_t p = j.points[idx];
            const std::size_t t = threshold_sweep ? idx : 0;
            const std::string prefix =
                model + ',' + orient + ',' + std::string(to_string(spec.param)) + ',' + format_value(spec.grid[p]);
            if (spec.analytic) {
                const CoverageResult* r = j.analytic ? &*j.analytic : nullptr;
                if (r && !r->numerics_ok) ++summary.nonconverged_rows;
                emit_result(w, prefix, "analytic", r, t, q, variant_flag, tiers);
            }
            if (spec.monte_carlo) {
                emit_result(w, prefix, "monte_carlo", &mc_results[mc_index.at(j.mc_key)], t, q, variant_flag, tiers);
            }
        }
    }
    summary.rows = w.rows();
    return summary;
}

std::vector<PresetInfo> list_presets() {
    return {
        {"fig4", "cluster spread sweep: association, average power and coverage vs sigma_c"},
        {"fig5", "average harvested power vs UAV height, both LOS models"},
        {"fig6a", "association probability vs UAV height, both LOS models"},
        {"fig6b", "energy coverage vs UAV height, both LOS models"},
        {"fig7", "association vs height for HH/HV/VV antennas at two UAV densities"},
        {"fig8", "energy coverage vs height for HH/HV/VV antennas at two UAV densities"},
        {"fig9", "average harvested power vs UAV density for HH/HV/VV antennas"},
        {"fig9p", "average power and coverage vs transmit power, both LOS models"},
        {"fig10", "energy coverage vs UAV density for HH/HV/VV antennas"},
        {"fig11", "energy coverage vs outage threshold, both LOS models"},
        {"fig12",
         "multi-height network: half of the UAVs at H1 = 50 m and the other half at H2 = 80 m, UE clustered "
         "around either height, against single-height references; coverage vs threshold"},
        {"alzer_diag", "coverage vs threshold for Alzer term counts 1, 3, 5, 8 against Monte Carlo"},
    };
}

SweepSpec make_preset(std::string_view name, const ScenarioConfig& base) {
    SweepSpec s;
    s.fixed = base;
    s.preset_name = std::string(name);
    s.allow_unsupported_analytic = true;
    const std::vector<LosModel> both{LosModel::high_altitude(), LosModel::low_altitude()};
    const std::vector<Orientation> all_orient{Orientation::HH, Orientation::HV, Orientation::VV};
    const Quantities assoc_only{true, false, false};
    const Quantities power_only{false, true, false};
    const Quantities coverage_only{false, false, true};
    auto density_variants = [] {
        std::vector<SweepVariant> v;
        for (double l : {1e-5, 1e-4}) {
            v.push_back({"lambda_u=" + format_value(l), [l](ScenarioConfig& c) { set_total_density(c, l); }});
        }
        return v;
    };

    if (name == "fig4") {
        s.param = SweepParam::SigmaC;
        s.grid = range(10, 90, 10);
        s.models = both;
    } else if (name == "fig5") {
        s.param = SweepParam::Height;
        s.grid = range(30, 150, 10);
        s.models = both;
        s.quantities = power_only;
    } else if (name == "fig6a") {
        s.param = SweepParam::Height;
        s.grid = range(30, 150, 10);
        s.models = both;
        s.quantities = assoc_only;
    } else if (name == "fig6b") {
        s.param = SweepParam::Height;
        s.grid = range(30, 150, 10);
        s.models = both;
        s.quantities = coverage_only;
    } else if (name == "fig7") {
        s.param = SweepParam::Height;
        s.grid = range(30, 150, 20);
        s.orientations = all_orient;
        s.variants = density_variants();
        s.quantities = assoc_only;
    } else if (name == "fig8") {
        s.param = SweepParam::Height;
        s.grid = range(30, 150, 20);
        s.orientations = all_orient;
        s.variants = density_variants();
        s.quantities = coverage_only;
    } else if (name == "fig9") {
        s.param = SweepParam::UavDensity;
        s.grid = {1e-5, 2e-5, 5e-5, 1e-4};
        s.orientations = all_orient;
        s.quantities = power_only;
    } else if (name == "fig9p") {
        s.param = SweepParam::TxPowerDbm;
        s.grid = {30, 33, 37, 40, 43};
        s.models = both;
        s.quantities = {false, true, true};
    } else if (name == "fig10") {
        s.param = SweepParam::UavDensity;
        s.grid = {1e-5, 2e-5, 5e-5, 1e-4};
        s.orientations = all_orient;
        s.quantities = coverage_only;
    } else if (name == "fig11") {
        s.param = SweepParam::ThresholdDbm;
        s.grid = range(-10, 30, 5);
        s.models = both;
        s.quantities = coverage_only;
    } else if (name == "fig12") {
        s.param = SweepParam::ThresholdDbm;
        s.grid = range(-10, 30, 5);
        s.quantities = coverage_only;
        const double density = base.uav_density;
        for (int mu : {1, 2}) {
            s.variants.push_back({"multi_height_mu=" + std::to_string(mu), [mu, density](ScenarioConfig& c) {
                                      const LosModel m = c.los_model;
                                      const Orientation o = c.orientation;
                                      ScenarioConfig mh = c;
                                      mh.heights = {50.0, 80.0};
                                      mh.tier_densities = {density / 2.0, density / 2.0};
                                      mh.tx_power_dbm = {c.tx_power_dbm.front(), c.tx_power_dbm.front(),
                                                         c.tx_power_dbm.front()};
                                      mh.cluster_tier = mu;
                                      mh.los_model = m;
                                      mh.orientation = o;
                                      c = mh;
                                  }});
        }
        for (double h : {50.0, 80.0}) {
            s.variants.push_back(
                {"single_height=" + format_value(h), [h](ScenarioConfig& c) { set_single_height(c, h); }});
        }
    } else if (name == "alzer_diag") {
        s.param = SweepParam::ThresholdDbm;
        s.grid = range(-10, 30, 5);
        s.models = both;
        s.quantities = coverage_only;
        for (int n : {1, 3, 5, 8}) {
            s.variants.push_back({"alzer_terms=" + std::to_string(n), [n](ScenarioConfig& c) { c.alzer_terms = n; }});
        }
    } else {
        throw SweepValidationError("unknown preset '" + std::string(name) + "'");
    }
    return s;
}

}  // namespace uaveh
