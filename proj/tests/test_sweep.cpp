#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "floqent/config.hpp"
#include "floqent/dissipator.hpp"
#include "floqent/dynamics.hpp"
#include "floqent/entanglement.hpp"
#include "floqent/errors.hpp"
#include "floqent/svg_plot.hpp"
#include "floqent/sweep.hpp"

using namespace floqent;
using nlohmann::json;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_point(const sweep::PointResult& a, const sweep::PointResult& b) {
    bool ok = a.index == b.index && same_bits(a.x1, b.x1) && same_bits(a.x2, b.x2) && a.ok == b.ok &&
              a.error == b.error && a.k_max == b.k_max && same_bits(a.c_inf, b.c_inf) && a.resonances == b.resonances &&
              a.periods == b.periods && a.rates.size() == b.rates.size();
    for (int k = 0; k < 4; ++k) ok = ok && same_bits(a.populations[k], b.populations[k]);
    for (const auto& [n, g] : a.rates) ok = ok && b.rates.count(n) && same_bits(g, b.rates.at(n));
    for (std::size_t i = 0; ok && i < a.concurrence.size(); ++i) {
        ok = same_bits(a.concurrence[i], b.concurrence[i]);
        for (int k = 0; k < 4; ++k) ok = ok && same_bits(a.populations_t[i][k], b.populations_t[i][k]);
    }
    return ok;
}

config::RunConfig small_grid() {
    return config::parse(json::parse(R"({
        "params": {"units": "Delta1", "gamma_bath": 0.001},
        "axis1": {"name": "eps0", "units": "omega", "min": 3.0, "max": 4.1, "count": 3},
        "axis2": {"name": "A", "units": "omega", "min": 1.0, "max": 3.8, "count": 2},
        "time_schedule": {"min_decade": 0, "max_decade": 3, "points_per_decade": 3},
        "outputs": ["concurrence", "populations", "rates", "spectrum"]
    })"));
}

std::string temp_dir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("floqent_test_" + name);
    std::filesystem::remove_all(p);
    return p.string();
}

} // namespace

TEST_CASE("config: units are mandatory and checked") {
    CHECK_THROWS_AS(config::parse(json::parse(R"({"params": {"J": -25}})")), InvalidArgument);
    CHECK_THROWS_AS(config::parse(json::parse(R"({"params": {"units": "GHz"}})")), InvalidArgument);
    CHECK_THROWS_AS(config::parse(json::parse(R"({"axis1": {"name": "A", "min": 0, "max": 1, "count": 3}})")),
                    InvalidArgument);
    CHECK_THROWS_AS(config::parse(json::parse(R"({"axis1": {"name": "A", "units": "omega", "min": 0, "max": 1, "count": 1}})")),
                    InvalidArgument);
    CHECK_THROWS_AS(config::parse(json::parse(R"({"axis1": {"name": "J", "units": "omega", "min": 0, "max": 1, "count": 3}})")),
                    InvalidArgument);
    CHECK_THROWS_AS(config::parse(json::parse(R"({"time_schedule": {"min_decade": 0, "max_decade": 8, "points_per_decade": 3}})")),
                    InvalidArgument);
    CHECK_THROWS_AS(config::parse(json::parse(R"({"n_t": 1000})")), InvalidArgument);
    CHECK_THROWS_AS(config::parse(json::parse(R"({"colour": 1})")), InvalidArgument);
    CHECK_THROWS_AS(config::load("/nonexistent/config.json"), InvalidArgument);

    const auto c = config::parse(json::parse(R"({
        "params": {"units": "Delta1", "J": -20},
        "point": {"units": "Delta1", "eps0": 41, "A": 38},
        "axis1": {"name": "A", "units": "Delta1", "min": 5, "max": 40, "count": 8}
    })"));
    CHECK(c.params.J == -20.0);
    CHECK(c.params.eps0 == doctest::Approx(41.0));
    CHECK(c.params.A == doctest::Approx(38.0));
    CHECK(c.axis1->min == doctest::Approx(0.5));
    CHECK(c.axis1->value(7) == 4.0);
}

TEST_CASE("config: canonical JSON round-trips and hashes stably") {
    const auto c = small_grid();
    const auto back = config::parse(config::to_json(c));
    CHECK(config::to_json(back) == config::to_json(c));
    CHECK(config::hash(back) == config::hash(c));
    CHECK(config::hash(c).size() == 16);
    auto other = c;
    other.params.T_b = 0.05;
    CHECK(config::hash(other) != config::hash(c));
}

TEST_CASE("one-point sweep equals the direct pipeline") {
    auto cfg = config::parse(json::parse(R"({"point": {"units": "omega", "eps0": 3.0},
        "axis1": {"name": "A", "units": "omega", "min": 3.8, "max": 5.0, "count": 2}})"));
    const auto r = sweep::run_sweep(cfg, 1);
    const auto& pt = r.points[0];
    REQUIRE(pt.ok);

    const auto p = model::default_params(3.0, 3.8);
    const auto s = model::static_spectrum(p);
    const auto b = floquet::floquet_basis(p);
    const auto e = floquet::transition_elements(b, model::build_coupling_op());
    const auto rt = dissipator::rate_tensor(b, e, dissipator::BathFunctions::from(p));
    const auto ss = dynamics::steady_state(rt, b, s);
    const Mat4 comp = dynamics::to_basis(ss.rho, dynamics::BasisTag::Computational, dynamics::Frames::from(b, s)).entries;
    CHECK(pt.c_inf == entanglement::concurrence(comp, {1e-8, 1e-8, 1e-2}).value);
    for (int k = 0; k < 4; ++k) CHECK(pt.populations[k] == ss.rho.entries(k, k).real());
    CHECK(pt.A_over_omega == doctest::Approx(3.8));
}

TEST_CASE("sweep output is independent of the worker count") {
    const auto cfg = small_grid();
    const auto serial = sweep::run_sweep(cfg, 1);
    const auto parallel = sweep::run_sweep(cfg, 3);
    REQUIRE(serial.points.size() == 6);
    for (std::size_t i = 0; i < serial.points.size(); ++i) {
        CHECK(serial.points[i].ok);
        CHECK(same_point(serial.points[i], parallel.points[i]));
    }
    CHECK(sweep::to_json(serial).dump() == sweep::to_json(parallel).dump());
    for (const auto& p : serial.points) {
        double sum = 0.0;
        for (double v : p.populations) sum += v;
        CHECK(std::abs(sum - 1.0) <= 1e-8);
        CHECK(p.c_inf >= 0.0);
        CHECK(p.c_inf <= 1.0);
    }
}

TEST_CASE("result files round-trip exactly and reruns are bit-identical") {
    const auto cfg = small_grid();
    const auto r = sweep::run_sweep(cfg, 2);
    const std::string d1 = temp_dir("rt1");
    const std::string d2 = temp_dir("rt2");
    sweep::write_result(r, d1);
    const auto back = sweep::read_result(d1);
    CHECK(back.config_hash == r.config_hash);
    CHECK(back.n_t == r.n_t);
    REQUIRE(back.points.size() == r.points.size());
    for (std::size_t i = 0; i < r.points.size(); ++i) CHECK(same_point(back.points[i], r.points[i]));

    sweep::write_result(sweep::run_sweep(cfg, 1), d2);
    auto slurp = [](const std::string& path) {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    CHECK(slurp(d1 + "/sweep.json") == slurp(d2 + "/sweep.json"));
    CHECK(slurp(d1 + "/points/point_000004.csv") == slurp(d2 + "/points/point_000004.csv"));
}

TEST_CASE("failed points are recorded and the sweep continues") {
    auto cfg = config::parse(json::parse(R"({"axis1": {"name": "A", "units": "omega", "min": 1.0, "max": 2.0, "count": 2},
                                             "k_max": 2})"));
    const auto r = sweep::run_sweep(cfg, 1);
    for (const auto& p : r.points) {
        CHECK_FALSE(p.ok);
        CHECK(p.error.rfind("numerical:", 0) == 0);
        CHECK(std::isnan(p.c_inf));
    }
    const auto back = sweep::from_json(json::parse(sweep::to_json(r).dump()));
    CHECK(std::isnan(back.points[0].c_inf));
    CHECK(back.points[1].error == r.points[1].error);
}

TEST_CASE("figure ids") {
    CHECK(sweep::figure_ids().size() == 11);
    CHECK_THROWS_AS(sweep::reproduce_figure("fig9", temp_dir("fig"), 1), InvalidArgument);
    const auto files = sweep::reproduce_figure("fig1c", temp_dir("fig"), 1);
    REQUIRE(files.size() == 2);
    std::ifstream in(files[0]);
    std::string header;
    std::getline(in, header);
    CHECK(header == "eps0_over_omega,E0,E1,E2,E3,C_ground");
}

TEST_CASE("svg rendering") {
    plot::LinePlot lp;
    lp.title = "C < 1 & more";
    lp.xlabel = "t/T";
    lp.ylabel = "C";
    lp.log_x = true;
    lp.series.push_back({"a", {1, 10, 100}, {0.1, 0.5, 0.2}, "", false});
    const std::string svg = plot::render(lp);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("C &lt; 1 &amp; more") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    lp.series[0].y.pop_back();
    CHECK_THROWS_AS(plot::render(lp), InvalidArgument);

    plot::Heatmap hm;
    hm.x = {0, 1, 2};
    hm.y = {0, 1};
    hm.z = {0, 0.5, 1, std::nan(""), 0.2, 0.3};
    const std::string h = plot::render(hm);
    CHECK(h.find("#bbbbbb") != std::string::npos);
    hm.z.pop_back();
    CHECK_THROWS_AS(plot::render(hm), InvalidArgument);

    CHECK(plot::colormap(0.0) == "#440154");
    CHECK(plot::colormap(1.0) == "#fde725");
}
