#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uaveh/analysis.hpp"
#include "uaveh/config.hpp"

namespace uaveh {

enum class SweepParam { SigmaC, Height, UavDensity, TxPowerDbm, ThresholdDbm };

std::string_view to_string(SweepParam p);
SweepParam parse_sweep_param(std::string_view name);

/// Rejected sweep definition (bad grid, unknown preset, analytic engine on HV/VV).
class SweepValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Grid syntax: "a:b:step" (inclusive, step > 0) or a comma list "x1,x2,...".
std::vector<double> parse_grid(std::string_view text);

/// Sets the swept parameter on a config. Height collapses to one height group.
void apply_param(ScenarioConfig& config, SweepParam p, double value);

struct Quantities {
    bool association = true;
    bool avg_power = true;
    bool coverage = true;
};

/// Extra experiment dimension (density level, height layout, Alzer order...).
/// `tag` lands in the CSV flags column as "variant:<tag>".
struct SweepVariant {
    std::string tag;
    std::function<void(ScenarioConfig&)> apply;
};

struct SweepSpec {
    SweepParam param = SweepParam::Height;
    std::vector<double> grid;
    ScenarioConfig fixed = default_config();
    std::vector<LosModel> models{LosModel::high_altitude()};
    std::vector<Orientation> orientations{Orientation::HH};
    std::vector<SweepVariant> variants;  // empty: one unnamed variant
    Quantities quantities;
    bool analytic = true;
    bool monte_carlo = true;
    /// Presets mix orientations; their HV/VV analytic rows are emitted as
    /// `unsupported` instead of failing validation.
    bool allow_unsupported_analytic = false;
    std::optional<std::string> preset_name;

    /// Throws SweepValidationError / ConfigValidationError.
    void validate() const;
};

struct PresetInfo {
    std::string name;
    std::string description;
};

std::vector<PresetInfo> list_presets();
/// Builds a named preset on top of `base` (the default scenario unless overridden).
SweepSpec make_preset(std::string_view name, const ScenarioConfig& base = default_config());

inline constexpr std::string_view kCsvHeader =
    "model,orientation,param_name,param_value,quantity,tier,state,engine,value,ci_halfwidth,flags";

struct SweepSummary {
    std::size_t rows = 0;
    std::size_t nonconverged_rows = 0;
};

/// Evaluates every (model, orientation, variant, grid point) and writes the
/// CSV in that deterministic order. Work items run concurrently.
SweepSummary run_sweep(const SweepSpec& spec, std::ostream& out);

/// Formats with 9 significant digits; "nan" for NaN.
std::string format_value(double v);

}  // namespace uaveh
