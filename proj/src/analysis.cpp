#include "uaveh/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "uaveh/parallel.hpp"

namespace uaveh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// r2^(-(alpha + 2) / 2): the HH received-power decay in squared 3D distance.
double hh_decay(double r2, double alpha) {
    if (alpha == 2.0) return 1.0 / (r2 * r2);
    if (alpha == 4.0) return 1.0 / (r2 * r2 * r2);
    return std::pow(r2, -0.5 * (alpha + 2.0));
}

}  // namespace

UnsupportedOrientation::UnsupportedOrientation(Orientation o)
    : std::invalid_argument("orientation " + std::string(to_string(o)) +
                            " has no analytical model; use the Monte Carlo engine") {}

TierStateGrid make_grid(int tiers, double fill) {
    return TierStateGrid(static_cast<std::size_t>(std::max(tiers, 0)), {fill, fill});
}

double grid_sum(const TierStateGrid& g) {
    double total = 0.0;
    for (const auto& row : g) total += row[0] + row[1];
    return total;
}

double tier_sum(const TierStateGrid& g, int tier) {
    const auto& row = g.at(static_cast<std::size_t>(tier));
    return row[0] + row[1];
}

double alzer_eta(int n_terms) {
    if (n_terms < 1) throw std::invalid_argument("alzer_eta: n_terms must be >= 1");
    const double n = n_terms;
    return n * std::exp(-std::lgamma(n + 1.0) / n);
}

AlzerParams make_alzer(int n_terms) { return {n_terms, alzer_eta(n_terms)}; }

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::round(c);
}

double exclusion_radius(double p_interferer, double p_serving, double l_serving, double alpha_s,
                        double alpha_sprime) {
    return std::pow((p_interferer / p_serving) * std::pow(l_serving, 1.0 + 2.0 / alpha_s),
                    alpha_sprime / (alpha_sprime + 2.0));
}

std::pair<double, double> all_los_association(double lambda_u, double sigma_c) {
    const double a0 = 1.0 / (1.0 + kTwoPi * lambda_u * sigma_c * sigma_c);
    return {a0, 1.0 - a0};
}

double CoverageResult::conditional_coverage(std::size_t t, int k, LinkState s) const {
    const double a = association.at(static_cast<std::size_t>(k))[index_of(s)];
    if (!(a > 0.0)) return 0.0;
    return coverage_contribution.at(t).at(static_cast<std::size_t>(k))[index_of(s)] / a;
}

AnalyticModel::AnalyticModel(const ScenarioConfig& config, int cluster_tier)
    : config_(config), failures_(std::make_shared<std::atomic<std::size_t>>(0)) {
    config_.validate();
    if (config_.orientation != Orientation::HH) throw UnsupportedOrientation(config_.orientation);
    if (cluster_tier < 1 || cluster_tier > config_.num_tiers()) {
        throw std::out_of_range("cluster tier " + std::to_string(cluster_tier) + " outside 1.." +
                                std::to_string(config_.num_tiers()));
    }
    config_.cluster_tier = cluster_tier;
    outer_tol_ = config_.quadrature_rel_tol;
    const double inner = std::max(outer_tol_ / 10.0, 2e-12);

    tiers_.push_back(TierStatistics::cluster_center(config_.tier_height(0), config_.cluster_sigma,
                                                    config_.alphas, config_.los_model, inner));
    for (int j = 1; j <= config_.num_tiers(); ++j) {
        tiers_.push_back(TierStatistics::ppp_tier(j, config_.tier_height(j), config_.tier_density(j),
                                                  config_.alphas, config_.los_model, inner));
    }
    for (int j = 0; j < tiers(); ++j) {
        const double h = tiers_[static_cast<std::size_t>(j)].height;
        effective_power_.push_back(config_.tier_power_w(j) * h * h);
    }
}

std::size_t AnalyticModel::failed_integrals() const { return failures_->load(); }

bool AnalyticModel::state_absent(LinkState m) const {
    return m == LinkState::Nlos && config_.los_model.kind == LosModelKind::AlwaysLos;
}

double AnalyticModel::run(IntegrationRequest& req) const {
    const IntegrationResult r = integrate_nothrow(req);
    if (!r.converged) failures_->fetch_add(1);
    return r.value;
}

double AnalyticModel::exclusion_distance(int j, LinkState m, double serving_metric) const {
    const TierStatistics& t = tier(j);
    const double r = std::pow(effective_power(j) / serving_metric, 1.0 / (t.alphas[m] + 2.0));
    const double d2 = r * r - t.height * t.height;
    return d2 > 0.0 ? std::sqrt(d2) : 0.0;
}

double AnalyticModel::ppp_void(int j, LinkState m, double from) const {
    return tier(j).intensity_within(from, m);
}

double AnalyticModel::ppp_laplace_exponent(int j, LinkState m, double from, double a_hat) const {
    if (!(a_hat > 0.0) || state_absent(m)) return 0.0;
    const TierStatistics& t = tier(j);
    const double aq = a_hat * effective_power(j);
    const double alpha = t.alphas[m];
    const double h2 = t.height * t.height;
    IntegrationRequest req;
    req.integrand = [&t, m, aq, alpha, h2](double d) {
        const double y = aq * hh_decay(d * d + h2, alpha);
        return y / (1.0 + y) * t.state_probability_at(m, d) * d;
    };
    req.lower = from;
    req.upper = kInfinity;
    req.tail_scale = std::max({from, t.height, std::pow(aq, 1.0 / (alpha + 2.0))});
    req.rel_tol = t.rel_tol;
    req.abs_floor = 1e-18;
    req.known_kinks = t.kinks();
    return kTwoPi * t.density * run(req);
}

double AnalyticModel::ppp_mean_power(int j, LinkState m, double from) const {
    if (state_absent(m)) return 0.0;
    const TierStatistics& t = tier(j);
    const double q = effective_power(j);
    const double alpha = t.alphas[m];
    const double h2 = t.height * t.height;
    IntegrationRequest req;
    req.integrand = [&t, m, q, alpha, h2](double d) {
        return q * hh_decay(d * d + h2, alpha) * t.state_probability_at(m, d) * d;
    };
    req.lower = from;
    req.upper = kInfinity;
    req.tail_scale = std::max(from, t.height);
    req.rel_tol = t.rel_tol;
    req.abs_floor = 1e-24;
    req.known_kinks = t.kinks();
    return kTwoPi * t.density * run(req);
}

double AnalyticModel::center_laplace_mass(LinkState m, double from, double a_hat) const {
    if (state_absent(m)) return 0.0;
    const TierStatistics& t = tier(0);
    if (!(a_hat > 0.0)) return t.cluster_mass_beyond(from, m);
    const double aq = a_hat * effective_power(0);
    const double alpha = t.alphas[m];
    const double h2 = t.height * t.height;
    IntegrationRequest req;
    req.integrand = [&t, m, aq, alpha, h2](double d) {
        return t.state_probability_at(m, d) * t.offset_pdf(d) / (1.0 + aq * hh_decay(d * d + h2, alpha));
    };
    req.lower = from;
    req.upper = t.offset_truncation(from, t.rel_tol / 100.0);
    req.rel_tol = t.rel_tol;
    req.abs_floor = 1e-18;
    req.known_kinks = t.kinks();
    return run(req);
}

double AnalyticModel::center_mean_power(LinkState m, double from) const {
    if (state_absent(m)) return 0.0;
    const TierStatistics& t = tier(0);
    const double q = effective_power(0);
    const double alpha = t.alphas[m];
    const double h2 = t.height * t.height;
    IntegrationRequest req;
    req.integrand = [&t, m, q, alpha, h2](double d) {
        return q * hh_decay(d * d + h2, alpha) * t.state_probability_at(m, d) * t.offset_pdf(d);
    };
    req.lower = from;
    req.upper = t.offset_truncation(from, t.rel_tol / 100.0);
    req.rel_tol = t.rel_tol;
    req.abs_floor = 1e-24;
    req.known_kinks = t.kinks();
    return run(req);
}

ExclusionBoundary AnalyticModel::exclusion(int j, int k, LinkState s, double l_serving) const {
    ExclusionBoundary b;
    for (LinkState m : kLinkStates) {
        b.path_loss[index_of(m)] = exclusion_radius(effective_power(j), effective_power(k), l_serving,
                                                    tier(k).alphas[s], tier(j).alphas[m]);
    }
    return b;
}

std::vector<double> AnalyticModel::outer_kinks(int k, LinkState s) const {
    const TierStatistics& serving = tier(k);
    std::vector<double> out = serving.kinks();
    // Serving distances where an interferer's exclusion boundary reaches its minimum path loss.
    for (int j = 0; j < tiers(); ++j) {
        for (LinkState m : kLinkStates) {
            if ((j == k && m == s) || state_absent(m)) continue;
            const TierStatistics& t = tier(j);
            const double r = std::pow(effective_power(k) / effective_power(j) *
                                          std::pow(t.height, t.alphas[m] + 2.0),
                                      1.0 / (serving.alphas[s] + 2.0));
            if (r > serving.height) out.push_back(std::sqrt(r * r - serving.height * serving.height));
        }
    }
    return out;
}

double AnalyticModel::serving_term(int k, LinkState s, double a_hat) const {
    if (k < 0 || k >= tiers()) throw std::out_of_range("serving_term: tier index");
    if (state_absent(s)) return 0.0;
    const TierStatistics& t = tier(k);
    const double qk = effective_power(k);
    const double alpha = t.alphas[s];
    const double h2 = t.height * t.height;

    IntegrationRequest req;
    req.integrand = [this, &t, k, s, a_hat, qk, alpha, h2](double d) {
        const double ps = t.state_probability_at(s, d);
        const double w = k == 0 ? ps * t.offset_pdf(d) : kTwoPi * t.density * ps * d;
        if (w == 0.0) return 0.0;
        const double metric = qk * hh_decay(d * d + h2, alpha);
        double expo = 0.0;
        for (int j = 1; j < tiers(); ++j) {
            for (LinkState m : kLinkStates) {
                if (state_absent(m)) continue;
                const double from = (j == k && m == s) ? d : exclusion_distance(j, m, metric);
                expo += ppp_void(j, m, from) + ppp_laplace_exponent(j, m, from, a_hat);
            }
        }
        double v = w * std::exp(-expo);
        if (a_hat > 0.0) v /= 1.0 + a_hat * metric;
        if (k != 0 && v != 0.0) {
            double j0 = 0.0;
            for (LinkState m : kLinkStates) {
                j0 += center_laplace_mass(m, exclusion_distance(0, m, metric), a_hat);
            }
            v *= j0;
        }
        return v;
    };
    req.lower = 0.0;
    if (k == 0) {
        req.upper = t.offset_truncation(0.0, outer_tol_ / 100.0);
    } else {
        req.upper = kInfinity;
        req.tail_scale = std::max(t.height, 1.0 / std::sqrt(std::numbers::pi * t.density));
    }
    req.rel_tol = outer_tol_;
    req.abs_floor = 1e-16;
    req.known_kinks = outer_kinks(k, s);
    return run(req);
}

double AnalyticModel::power_term(int k, LinkState s) const {
    if (k < 0 || k >= tiers()) throw std::out_of_range("power_term: tier index");
    if (state_absent(s)) return 0.0;
    const TierStatistics& t = tier(k);
    const double qk = effective_power(k);
    const double alpha = t.alphas[s];
    const double h2 = t.height * t.height;
    const double xi = config_.rectifier_efficiency;

    IntegrationRequest req;
    req.integrand = [this, &t, k, s, qk, alpha, h2, xi](double d) {
        const double ps = t.state_probability_at(s, d);
        const double w = k == 0 ? ps * t.offset_pdf(d) : kTwoPi * t.density * ps * d;
        if (w == 0.0) return 0.0;
        const double metric = qk * hh_decay(d * d + h2, alpha);
        double expo = 0.0;
        double received = metric;
        for (int j = 1; j < tiers(); ++j) {
            for (LinkState m : kLinkStates) {
                if (state_absent(m)) continue;
                const double from = (j == k && m == s) ? d : exclusion_distance(j, m, metric);
                expo += ppp_void(j, m, from);
                received += ppp_mean_power(j, m, from);
            }
        }
        const double v = w * std::exp(-expo);
        if (v == 0.0) return 0.0;
        if (k == 0) return v * xi * received;
        double center_weight = 0.0;
        double center_power = 0.0;
        for (LinkState m : kLinkStates) {
            const double from = exclusion_distance(0, m, metric);
            center_weight += center_laplace_mass(m, from, 0.0);
            center_power += center_mean_power(m, from);
        }
        return v * xi * (received * center_weight + center_power);
    };
    req.lower = 0.0;
    if (k == 0) {
        req.upper = t.offset_truncation(0.0, outer_tol_ / 100.0);
    } else {
        req.upper = kInfinity;
        req.tail_scale = std::max(t.height, 1.0 / std::sqrt(std::numbers::pi * t.density));
    }
    req.rel_tol = outer_tol_;
    req.abs_floor = 1e-24;
    req.known_kinks = outer_kinks(k, s);
    return run(req);
}

double AnalyticModel::laplace_interference(int j, int k, double a_hat, const ExclusionBoundary& excl) const {
    if (j < 0 || j >= tiers() || k < 0 || k >= tiers()) throw std::out_of_range("laplace_interference: tier");
    if (!(a_hat >= 0.0)) throw std::invalid_argument("laplace_interference: a_hat must be >= 0");
    if (j == 0 && k == 0) return 1.0;
    const TierStatistics& t = tier(j);
    if (j == 0) {
        double num = 0.0;
        double den = 0.0;
        for (LinkState m : kLinkStates) {
            const double from = t.horizontal_distance(excl[m], m);
            num += center_laplace_mass(m, from, a_hat);
            den += center_laplace_mass(m, from, 0.0);
        }
        return den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : 1.0;
    }
    double expo = 0.0;
    for (LinkState m : kLinkStates) {
        expo += ppp_laplace_exponent(j, m, t.horizontal_distance(excl[m], m), a_hat);
    }
    return std::exp(-expo);
}

double AnalyticModel::psi_interference_mean(int j, const ExclusionBoundary& excl) const {
    if (j < 0 || j >= tiers()) throw std::out_of_range("psi_interference_mean: tier");
    const TierStatistics& t = tier(j);
    double total = 0.0;
    for (LinkState m : kLinkStates) {
        const double from = t.horizontal_distance(excl[m], m);
        total += j == 0 ? center_mean_power(m, from) : ppp_mean_power(j, m, from);
    }
    return total;
}

CoverageResult analyze(const AnalyticModel& model, const AnalysisRequest& request) {
    const int tiers = model.tiers();
    const AlzerParams alzer = make_alzer(model.config().alzer_terms);
    const double xi = model.config().rectifier_efficiency;
    for (double g : request.thresholds_w) {
        if (!(g > 0.0)) throw std::invalid_argument("energy threshold must be positive");
    }

    struct Unit {
        int kind;  // 0 association, 1 power, 2 coverage term
        int k;
        LinkState s;
        std::size_t t;
        int n;
        double value = 0.0;
    };
    std::vector<Unit> units;
    for (int k = 0; k < tiers; ++k) {
        for (LinkState s : kLinkStates) {
            units.push_back({0, k, s, 0, 0});
            if (request.avg_power) units.push_back({1, k, s, 0, 0});
            for (std::size_t t = 0; t < request.thresholds_w.size(); ++t) {
                for (int n = 1; n <= alzer.n_terms; ++n) units.push_back({2, k, s, t, n});
            }
        }
    }

    const std::size_t failures_before = model.failed_integrals();
    parallel_for(units.size(), [&](std::size_t i) {
        Unit& u = units[i];
        switch (u.kind) {
            case 0:
                u.value = model.serving_term(u.k, u.s, 0.0);
                break;
            case 1:
                u.value = model.power_term(u.k, u.s);
                break;
            default:
                u.value = model.serving_term(u.k, u.s, alzer.a_hat(u.n, request.thresholds_w[u.t], xi));
        }
    });

    CoverageResult out;
    out.engine = Engine::Analytic;
    out.cluster_tier = model.config().cluster_tier;
    out.association = make_grid(tiers);
    out.has_power = request.avg_power;
    out.avg_power_contribution_w = make_grid(tiers);
    const std::size_t nt = request.thresholds_w.size();
    for (double g : request.thresholds_w) out.thresholds_dbm.push_back(watts_to_dbm(g));
    out.coverage_contribution.assign(nt, make_grid(tiers));

    for (const Unit& u : units) {
        const auto k = static_cast<std::size_t>(u.k);
        const int si = index_of(u.s);
        if (u.kind == 0) out.association[k][si] = u.value;
        if (u.kind == 1) out.avg_power_contribution_w[k][si] = u.value;
    }
    // n = 0 term is the association probability itself.
    for (std::size_t t = 0; t < nt; ++t) out.coverage_contribution[t] = out.association;
    for (const Unit& u : units) {
        if (u.kind != 2) continue;
        const double sign = (u.n % 2 == 0) ? 1.0 : -1.0;
        out.coverage_contribution[u.t][static_cast<std::size_t>(u.k)][index_of(u.s)] +=
            sign * binomial(alzer.n_terms, u.n) * u.value;
    }
    for (std::size_t t = 0; t < nt; ++t) {
        const double raw = grid_sum(out.coverage_contribution[t]);
        out.total_coverage_raw.push_back(raw);
        out.total_coverage.push_back(std::clamp(raw, 0.0, 1.0));
    }
    out.avg_power_total_w = grid_sum(out.avg_power_contribution_w);
    out.numerics_ok = model.failed_integrals() == failures_before;
    return out;
}

AssociationReport association_probabilities(const AnalyticModel& model) {
    return {analyze(model, {true, false, {}}).association};
}

AssociationReport association_probabilities(const ScenarioConfig& config) {
    return association_probabilities(AnalyticModel(config));
}

CoverageResult avg_harvested_power(const ScenarioConfig& config) {
    return analyze(AnalyticModel(config), {true, true, {}});
}

CoverageResult energy_coverage(const ScenarioConfig& config, const std::vector<double>& thresholds_w) {
    return analyze(AnalyticModel(config), {true, false, thresholds_w});
}

CoverageResult energy_coverage_multiheight(const ScenarioConfig& config, int mu,
                                           const std::vector<double>& thresholds_w) {
    return analyze(AnalyticModel(config, mu), {true, false, thresholds_w});
}

double laplace_interference(const ScenarioConfig& config, int j, int k, double a_hat, double exclusion) {
    return AnalyticModel(config).laplace_interference(j, k, a_hat, ExclusionBoundary::uniform(exclusion));
}

double psi_interference_mean(const ScenarioConfig& config, int j, double exclusion) {
    return AnalyticModel(config).psi_interference_mean(j, ExclusionBoundary::uniform(exclusion));
}

}  // namespace uaveh
