#pragma once

#include <vector>

#include "uaveh/channel.hpp"

namespace uaveh {

enum class TierKind { ClusterCenter, PppTier };

/// Path-loss statistics of one tier as seen from the typical UE at the origin.
///
/// ClusterCenter: the single UAV above the UE's own cluster center, at a
/// Rayleigh(sigma_c) horizontal offset. PppTier: a homogeneous PPP of UAVs
/// with `density` per m^2. Every UAV of the tier flies at `height`.
///
/// Path-loss CCDFs are joint with the link state: ccdf(x, s) is
/// P(link is in state s and L_s >= x). Below the minimum path loss
/// height^alpha_s the CCDF returns the full state mass.
///
/// Internally every integral runs over horizontal distance d, where
/// r = sqrt(d^2 + height^2) and L_s = r^alpha_s. The substitution removes the
/// square-root endpoint behavior of the elevation angle at r = height.
struct TierStatistics {
    TierKind kind = TierKind::ClusterCenter;
    int index = 0;
    double height = 50.0;
    double density = 0.0;
    double sigma_c = 10.0;
    PathLossExponents alphas;
    LosModel los_model;
    double rel_tol = 1e-8;

    static TierStatistics cluster_center(double height, double sigma_c, PathLossExponents alphas,
                                         LosModel model, double rel_tol);
    static TierStatistics ppp_tier(int index, double height, double density, PathLossExponents alphas,
                                   LosModel model, double rel_tol);

    /// P_s at horizontal distance d.
    double state_probability_at(LinkState s, double d) const;
    /// Horizontal distance whose state-s path loss equals x; 0 below the minimum.
    double horizontal_distance(double x, LinkState s) const;
    double path_loss_at(double d, LinkState s) const;
    double min_path_loss(LinkState s) const;

    /// Rayleigh density of the cluster offset, f_D(d).
    double offset_pdf(double d) const;
    /// Horizontal distance beyond which the Rayleigh tail past `from` carries
    /// less than `eps` of the mass beyond `from`.
    double offset_truncation(double from, double eps) const;

    /// Cluster center only: integral of P_s f_D over d in [from, infinity).
    double cluster_mass_beyond(double from, LinkState s) const;
    /// PPP only: 2 pi lambda * integral of P_s(d) d over d in [0, upto].
    double intensity_within(double upto, LinkState s) const;

    /// Horizontal distances where the LOS law has a derivative jump.
    std::vector<double> kinks() const;
};

/// CCDF of the tier-0 path loss in state s.
double ccdf_tier0(const TierStatistics& stats, double x, LinkState s);
/// Sum over both states.
double ccdf_tier0_total(const TierStatistics& stats, double x);
/// PDF of the tier-0 path loss in state s. Throws std::domain_error below the minimum.
double pdf_tier0(const TierStatistics& stats, double x, LinkState s);

/// Intensity measure of the state-s path-loss process on [0, x).
double intensity_tier_k(const TierStatistics& stats, double x, LinkState s);
/// Its derivative in x (closed form); 0 below the minimum path loss.
double intensity_derivative_tier_k(const TierStatistics& stats, double x, LinkState s);
/// exp(-intensity): no state-s UAV of the tier has path loss below x.
double ccdf_tier_k(const TierStatistics& stats, double x, LinkState s);
/// Product over both states.
double ccdf_tier_k_joint(const TierStatistics& stats, double x);
/// PDF of the smallest state-s path loss in the tier; 0 below the minimum.
double pdf_tier_k(const TierStatistics& stats, double x, LinkState s);

}  // namespace uaveh
