#pragma once

#include <array>
#include <string>
#include <string_view>

namespace uaveh {

/// Propagation state of a single UE-UAV link.
enum class LinkState { Los = 0, Nlos = 1 };

inline constexpr std::array<LinkState, 2> kLinkStates{LinkState::Los, LinkState::Nlos};

inline constexpr int index_of(LinkState s) { return static_cast<int>(s); }
inline constexpr LinkState other(LinkState s) {
    return s == LinkState::Los ? LinkState::Nlos : LinkState::Los;
}
std::string_view to_string(LinkState s);

/// Transmitter/receiver antenna orientation (UAV first, UE second).
enum class Orientation { HH, HV, VV };

std::string_view to_string(Orientation o);
Orientation parse_orientation(std::string_view text);

enum class LosModelKind { HighAltitude, LowAltitude, AlwaysLos };

/// Selectable LOS probability law. `b` and `c` are only read by the
/// high-altitude (elevation-angle logistic) model.
struct LosModel {
    LosModelKind kind = LosModelKind::HighAltitude;
    double b = 11.95;
    double c = 0.136;

    static LosModel high_altitude(double b = 11.95, double c = 0.136) {
        return {LosModelKind::HighAltitude, b, c};
    }
    static LosModel low_altitude() { return {LosModelKind::LowAltitude, 11.95, 0.136}; }
    static LosModel always_los() { return {LosModelKind::AlwaysLos, 11.95, 0.136}; }

    friend bool operator==(const LosModel&, const LosModel&) = default;
};

/// Short name used in config files and CSV output: "high", "low", "always".
std::string_view to_string(LosModelKind k);
LosModelKind parse_los_model(std::string_view text);

/// 3D distance at which the low-altitude model's min(1, 18/r) factor saturates.
inline constexpr double kLowAltitudeKinkM = 18.0;

/// Path-loss exponents for the two link states.
struct PathLossExponents {
    double los = 2.0;
    double nlos = 4.0;

    double operator[](LinkState s) const { return s == LinkState::Los ? los : nlos; }
    friend bool operator==(const PathLossExponents&, const PathLossExponents&) = default;
};

/// Probability that a link of 3D length `r` to a UAV at height `h` is LOS.
/// Throws std::domain_error when r < h.
double los_probability(const LosModel& model, double r, double h);

/// 1 - los_probability, evaluated without cancellation.
double nlos_probability(const LosModel& model, double r, double h);

double state_probability(const LosModel& model, LinkState s, double r, double h);

/// Dimensionless path loss r^alpha (no reference-distance constant).
double path_loss(double r, double alpha);

/// Product gain G_TX * G_RX at elevation angle `theta` (radians).
double antenna_gain_angle(Orientation o, double theta);

/// Same gain expressed through geometry: UAV at height `h`, horizontal
/// distance `d` from the UE. Avoids the asin round trip in hot loops.
double antenna_gain_geometry(Orientation o, double h, double d);

/// HH gain written in terms of the link's path loss: h^2 * L^(-2/alpha).
/// Throws std::domain_error when L < h^alpha.
double effective_gain_hh(double path_loss_value, double alpha, double h);

}  // namespace uaveh
