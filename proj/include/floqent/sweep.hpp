// Parameter grids over (eps0, A), result persistence and figure presets.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "floqent/config.hpp"
#include "floqent/model.hpp"

namespace floqent::sweep {

inline constexpr const char* kVersion = "0.1.0";

struct PointResult {
    int index{0};                  // flattened grid index, axis1 fastest
    double x1{0.0};                // axis coordinates in units of omega
    double x2{0.0};
    double eps0_over_omega{0.0};
    double A_over_omega{0.0};
    bool ok{false};
    std::string error;             // "<kind>: <message>"; a note about skipped rates when ok
    int k_max{0};
    double c_inf{0.0};
    std::array<double, 4> populations{};  // steady rho_kk, H_0 eigenbasis
    std::string resonances;               // e.g. "SE(m=3,s0/e-);SS(m=8,s0/s1)"
    std::array<double, 4> energies{};     // with outputs.spectrum
    std::array<double, 4> quasi{};
    std::map<int, double> rates;          // photon index -> Gamma_r^(n), with outputs.rates
    // Time series, with a time schedule.
    std::vector<std::int64_t> periods;
    std::vector<double> concurrence;
    std::vector<std::array<double, 4>> populations_t;
};

struct SweepResult {
    config::RunConfig config;
    std::string config_hash;
    std::string version{kVersion};
    int n_t{0};
    std::vector<PointResult> points;

    int nx() const;
    int ny() const;
};

/// Full pipeline for a single parameter set: H_0, Floquet basis, rates,
/// steady state and concurrence, plus the optional outputs of `cfg`.
/// Failures are captured in the returned record, never thrown.
PointResult solve_point(const model::SystemParams& p, const config::RunConfig& cfg);

/// Runs every grid point on `workers` threads. Results are keyed by grid
/// index, so the output does not depend on the worker count.
SweepResult run_sweep(const config::RunConfig& cfg, int workers = 1);

/// Parameters of grid point `index`.
model::SystemParams point_params(const config::RunConfig& cfg, int index);

/// Scalar per-point data as one JSON document with column arrays; NaN is
/// written as null. Time series are not included (see write_result).
nlohmann::json to_json(const SweepResult& r);
SweepResult from_json(const nlohmann::json& doc);

/// Writes <dir>/sweep.json and, when time series exist, <dir>/points/point_<index>.csv.
void write_result(const SweepResult& r, const std::string& dir);
SweepResult read_result(const std::string& dir);

/// Per-point time-series table: period, t/T, C, rho_00..rho_33.
std::string series_csv(const PointResult& p);

/// Writes the figure's data table(s) and SVG image(s) into `dir`; returns the
/// paths written. Unknown ids raise InvalidArgument.
std::vector<std::string> reproduce_figure(const std::string& id, const std::string& dir, int workers,
                                          int k_max = -1, int n_t = 1024);

/// Recognised figure ids.
const std::vector<std::string>& figure_ids();

} // namespace floqent::sweep
