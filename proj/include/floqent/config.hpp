// JSON run configuration.
//
// Schema (all keys optional unless noted):
//
//   {
//     "params": { "units": "Delta1",            // required whenever "params" is present
//                 "delta1": 1, "delta2": 1.5, "J": -25, "omega": 10,
//                 "gamma_bath": 0.001, "omega_c": 333, "T_b": 0.0467,
//                 "eps0": 0, "A": 0 },
//     "point":  { "units": "omega", "eps0": 3, "A": 3.8 },   // or "Delta1"
//     "axis1":  { "name": "eps0", "units": "omega", "min": 2.5, "max": 4.5, "count": 61 },
//     "axis2":  { "name": "A",    "units": "omega", "min": 0,   "max": 6,   "count": 61 },
//     "time_schedule": { "min_decade": 0, "max_decade": 6, "points_per_decade": 10 },
//     "outputs": ["concurrence", "populations", "rates", "spectrum"],
//     "resonance_window": { "units": "omega", "value": 0.6 },
//     "rate_n_max": 6,
//     "k_max": -1,
//     "n_t": 1024
//   }

#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "floqent/model.hpp"

namespace floqent::config {

enum class AxisName { Eps0, A };
std::string to_string(AxisName a);

struct Axis {
    AxisName name{AxisName::A};
    double min{0.0};      // in units of omega
    double max{1.0};
    int count{2};

    double value(int i) const;
};

struct TimeSchedule {
    int min_decade{0};
    int max_decade{6};
    int per_decade{10};
};

struct Outputs {
    bool concurrence{true};
    bool populations{true};
    bool rates{false};
    bool spectrum{false};
};

struct RunConfig {
    model::SystemParams params;
    std::optional<Axis> axis1;
    std::optional<Axis> axis2;
    std::optional<TimeSchedule> schedule;
    Outputs outputs;
    double resonance_window_over_omega{model::kDefaultResonanceWindowOverOmega};
    int rate_n_max{6};
    int k_max{-1};
    int n_t{1024};

    /// Throws InvalidArgument on any broken invariant.
    void validate() const;
};

/// Parse a configuration document. Missing or unknown units, malformed axes
/// and out-of-range values raise InvalidArgument.
RunConfig parse(const nlohmann::json& doc);
RunConfig load(const std::string& path);

/// Canonical form: every field written out, units fixed to Delta1 for the
/// parameters and omega for axes. parse(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& c);

/// 64-bit FNV-1a of the canonical JSON text, as 16 hex digits.
std::string hash(const RunConfig& c);

} // namespace floqent::config
