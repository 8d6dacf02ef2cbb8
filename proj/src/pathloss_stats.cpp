#include "uaveh/pathloss_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "uaveh/quadrature.hpp"

namespace uaveh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_kind(const TierStatistics& stats, TierKind kind, const char* what) {
    if (stats.kind != kind) {
        throw std::invalid_argument(std::string(what) +
                                    (kind == TierKind::ClusterCenter ? ": needs the cluster-center tier"
                                                                     : ": needs a PPP tier"));
    }
}

double inner_tol(double rel_tol) { return std::max(rel_tol, 2e-12); }

}  // namespace

TierStatistics TierStatistics::cluster_center(double height, double sigma_c, PathLossExponents alphas,
                                              LosModel model, double rel_tol) {
    if (!(height > 0.0) || !(sigma_c > 0.0)) throw std::invalid_argument("cluster_center: bad geometry");
    TierStatistics t;
    t.kind = TierKind::ClusterCenter;
    t.index = 0;
    t.height = height;
    t.sigma_c = sigma_c;
    t.alphas = alphas;
    t.los_model = model;
    t.rel_tol = rel_tol;
    return t;
}

TierStatistics TierStatistics::ppp_tier(int index, double height, double density, PathLossExponents alphas,
                                        LosModel model, double rel_tol) {
    if (!(height > 0.0) || !(density > 0.0)) throw std::invalid_argument("ppp_tier: bad parameters");
    TierStatistics t;
    t.kind = TierKind::PppTier;
    t.index = index;
    t.height = height;
    t.density = density;
    t.alphas = alphas;
    t.los_model = model;
    t.rel_tol = rel_tol;
    return t;
}

double TierStatistics::state_probability_at(LinkState s, double d) const {
    const double r = std::sqrt(d * d + height * height);
    return state_probability(los_model, s, std::max(r, height), height);
}

double TierStatistics::horizontal_distance(double x, LinkState s) const {
    const double r2 = std::pow(x, 2.0 / alphas[s]);
    const double d2 = r2 - height * height;
    return d2 > 0.0 ? std::sqrt(d2) : 0.0;
}

double TierStatistics::path_loss_at(double d, LinkState s) const {
    return path_loss(std::sqrt(d * d + height * height), alphas[s]);
}

double TierStatistics::min_path_loss(LinkState s) const { return path_loss(height, alphas[s]); }

double TierStatistics::offset_pdf(double d) const {
    const double v = sigma_c * sigma_c;
    return d / v * std::exp(-d * d / (2.0 * v));
}

double TierStatistics::offset_truncation(double from, double eps) const {
    return std::sqrt(from * from + 2.0 * sigma_c * sigma_c * std::log(1.0 / eps));
}

std::vector<double> TierStatistics::kinks() const {
    if (los_model.kind != LosModelKind::LowAltitude || height >= kLowAltitudeKinkM) return {};
    return {std::sqrt(kLowAltitudeKinkM * kLowAltitudeKinkM - height * height)};
}

double TierStatistics::cluster_mass_beyond(double from, LinkState s) const {
    require_kind(*this, TierKind::ClusterCenter, "cluster_mass_beyond");
    if (s == LinkState::Nlos && los_model.kind == LosModelKind::AlwaysLos) return 0.0;
    const double tol = inner_tol(rel_tol);
    IntegrationRequest req;
    req.integrand = [this, s](double d) { return state_probability_at(s, d) * offset_pdf(d); };
    req.lower = from;
    req.upper = offset_truncation(from, tol / 100.0);
    req.rel_tol = tol;
    req.known_kinks = kinks();
    return integrate_nothrow(req).value;
}

double TierStatistics::intensity_within(double upto, LinkState s) const {
    require_kind(*this, TierKind::PppTier, "intensity_within");
    if (!(upto > 0.0)) return 0.0;
    if (s == LinkState::Nlos && los_model.kind == LosModelKind::AlwaysLos) return 0.0;
    IntegrationRequest req;
    req.integrand = [this, s](double d) { return state_probability_at(s, d) * d; };
    req.lower = 0.0;
    req.upper = upto;
    req.rel_tol = inner_tol(rel_tol);
    req.abs_floor = 0.0;
    req.known_kinks = kinks();
    return kTwoPi * density * integrate_nothrow(req).value;
}

double ccdf_tier0(const TierStatistics& stats, double x, LinkState s) {
    require_kind(stats, TierKind::ClusterCenter, "ccdf_tier0");
    return stats.cluster_mass_beyond(stats.horizontal_distance(x, s), s);
}

double ccdf_tier0_total(const TierStatistics& stats, double x) {
    return ccdf_tier0(stats, x, LinkState::Los) + ccdf_tier0(stats, x, LinkState::Nlos);
}

double pdf_tier0(const TierStatistics& stats, double x, LinkState s) {
    require_kind(stats, TierKind::ClusterCenter, "pdf_tier0");
    const double alpha = stats.alphas[s];
    const double floor = stats.min_path_loss(s);
    if (!(x >= floor * (1.0 - 1e-12))) throw std::domain_error("pdf_tier0: x below minimum path loss");
    const double r = std::max(std::pow(x, 1.0 / alpha), stats.height);
    const double r2 = r * r;
    const double v = stats.sigma_c * stats.sigma_c;
    return (1.0 / v) * (std::pow(x, 2.0 / alpha - 1.0) / alpha) *
           state_probability(stats.los_model, s, r, stats.height) *
           std::exp(-(r2 - stats.height * stats.height) / (2.0 * v));
}

double intensity_tier_k(const TierStatistics& stats, double x, LinkState s) {
    require_kind(stats, TierKind::PppTier, "intensity_tier_k");
    if (!(x > stats.min_path_loss(s))) return 0.0;
    return stats.intensity_within(stats.horizontal_distance(x, s), s);
}

double intensity_derivative_tier_k(const TierStatistics& stats, double x, LinkState s) {
    require_kind(stats, TierKind::PppTier, "intensity_derivative_tier_k");
    if (!(x >= stats.min_path_loss(s))) return 0.0;
    const double alpha = stats.alphas[s];
    const double r = std::max(std::pow(x, 1.0 / alpha), stats.height);
    return kTwoPi * stats.density * (std::pow(x, 2.0 / alpha - 1.0) / alpha) *
           state_probability(stats.los_model, s, r, stats.height);
}

double ccdf_tier_k(const TierStatistics& stats, double x, LinkState s) {
    return std::exp(-intensity_tier_k(stats, x, s));
}

double ccdf_tier_k_joint(const TierStatistics& stats, double x) {
    return ccdf_tier_k(stats, x, LinkState::Los) * ccdf_tier_k(stats, x, LinkState::Nlos);
}

double pdf_tier_k(const TierStatistics& stats, double x, LinkState s) {
    if (!(x >= stats.min_path_loss(s))) return 0.0;
    return intensity_derivative_tier_k(stats, x, s) * std::exp(-intensity_tier_k(stats, x, s));
}

}  // namespace uaveh
