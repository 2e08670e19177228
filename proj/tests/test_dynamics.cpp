#include <doctest.h>

#include <cmath>

#include "floqent/dissipator.hpp"
#include "floqent/dynamics.hpp"
#include "floqent/entanglement.hpp"
#include "floqent/errors.hpp"
#include "floqent/floquet.hpp"
#include "support.hpp"

using namespace floqent;

namespace {

struct Setup {
    model::StaticSpectrum s;
    floquet::FloquetBasis b;
    floquet::TransitionElements e;
    dissipator::BathFunctions bath;
    dissipator::RateTensor r;
};

Setup setup(double eps, double a, double gamma_scale = 1.0) {
    auto p = model::default_params(eps, a);
    p.gamma_bath *= gamma_scale;
    Setup x;
    x.s = model::static_spectrum(p);
    x.b = floquet::floquet_basis(p);
    x.e = floquet::transition_elements(x.b, model::build_coupling_op());
    x.bath = dissipator::BathFunctions::from(p);
    x.r = dissipator::rate_tensor(x.b, x.e, x.bath);
    return x;
}

} // namespace

TEST_CASE("basis changes round-trip") {
    const auto x = setup(3.0, 3.8);
    const auto fr = dynamics::Frames::from(x.b, x.s);
    const dynamics::DensityMatrix rho{testsupport::random_density(), dynamics::BasisTag::Computational};
    const auto f = dynamics::to_basis(rho, dynamics::BasisTag::FloquetT0, fr);
    const auto h = dynamics::to_basis(f, dynamics::BasisTag::H0Eigen, fr);
    const auto back = dynamics::to_basis(h, dynamics::BasisTag::Computational, fr);
    CHECK((back.entries - rho.entries).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(back.basis == dynamics::BasisTag::Computational);
    CHECK((dynamics::unvectorize(dynamics::vectorize(rho.entries)) - rho.entries).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("evolution preserves trace and Hermiticity") {
    const auto x = setup(3.0, 3.8);
    const auto fr = dynamics::Frames::from(x.b, x.s);
    const auto rec = dynamics::evolve(x.r, x.b, x.s, dynamics::initial_state(x.s), dynamics::log_schedule(0, 7, 10));
    for (const auto& rho : rec.rho) {
        const Mat4 c = dynamics::to_basis(rho, dynamics::BasisTag::Computational, fr).entries;
        CHECK(std::abs(c.trace() - cplx(1.0)) <= 1e-10);
        CHECK(numerics::hermiticity_defect(c) <= 1e-10);
    }
    for (double c : rec.concurrence) {
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
    }
    CHECK(rec.times[3] == doctest::Approx(rec.periods[3] * 2.0 * std::numbers::pi / 10.0));
}

TEST_CASE("long-time evolution converges to the steady state") {
    const auto x = setup(4.1, 3.8);
    const auto ss = dynamics::steady_state(x.r, x.b, x.s);
    CHECK(ss.residual <= 1e-10);
    CHECK(ss.kernel_gap > 1e-12);
    const auto rec = dynamics::evolve(x.r, x.b, x.s, dynamics::initial_state(x.s), {10'000'000});
    CHECK((rec.rho[0].entries - ss.rho.entries).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(std::abs(ss.rho.entries.trace() - cplx(1.0)) < 1e-12);
}

TEST_CASE("full time-dependent generator agrees with the averaged one over 100 periods") {
    for (auto [eps, a] : {std::pair{3.0, 3.8}, std::pair{4.1, 3.8}}) {
        const auto x = setup(eps, a);
        const auto fr = dynamics::Frames::from(x.b, x.s);
        const Mat4 r0 = dynamics::to_basis(dynamics::initial_state(x.s), dynamics::BasisTag::FloquetT0, fr).entries;
        const auto full = dynamics::oracle::evolve_full(x.b, x.e, x.bath, r0, 100, 512);
        std::vector<std::int64_t> sched;
        for (int m = 1; m <= 100; ++m) sched.push_back(m);
        const auto rec = dynamics::evolve(x.r, x.b, x.s, {r0, dynamics::BasisTag::FloquetT0}, sched);
        double worst = 0.0;
        for (int m = 0; m < 100; ++m) {
            const Mat4 avg = dynamics::to_basis(rec.rho[m], dynamics::BasisTag::FloquetT0, fr).entries;
            worst = std::max(worst, (avg - full[m]).cwiseAbs().maxCoeff());
        }
        CHECK(worst <= 1e-4);
    }
}

TEST_CASE("steady state requires a unique kernel") {
    const auto x = setup(3.0, 3.8, 0.0);
    CHECK_THROWS_AS(dynamics::steady_state(x.r, x.b, x.s), NumericalError);
}

TEST_CASE("log schedule and argument checks") {
    const auto s = dynamics::log_schedule(0, 2, 4);
    CHECK(s.front() == 1);
    CHECK(s.back() == 100);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
    CHECK(dynamics::log_schedule(7, 7, 3) == std::vector<std::int64_t>{10'000'000});
    CHECK_THROWS_AS(dynamics::log_schedule(0, 8, 1), InvalidArgument);
    CHECK_THROWS_AS(dynamics::log_schedule(3, 2, 1), InvalidArgument);

    const auto x = setup(3.0, 1.0);
    const auto rho0 = dynamics::initial_state(x.s);
    CHECK_THROWS_AS(dynamics::evolve(x.r, x.b, x.s, rho0, {5, 3}), InvalidArgument);
    CHECK_THROWS_AS(dynamics::evolve(x.r, x.b, x.s, rho0, {10'000'001}), InvalidArgument);
    const auto rec = dynamics::evolve(x.r, x.b, x.s, rho0, {0});
    CHECK((rec.rho[0].entries - dynamics::to_basis(rho0, dynamics::BasisTag::H0Eigen,
                                                   dynamics::Frames::from(x.b, x.s)).entries)
              .cwiseAbs()
              .maxCoeff() < 1e-14);
    CHECK(std::abs(rec.rho[0].entries(0, 0) - cplx(1.0)) < 1e-14);
}

TEST_CASE("tomography tables mirror the record") {
    const auto x = setup(4.1, 3.8);
    const auto rec = dynamics::evolve(x.r, x.b, x.s, dynamics::initial_state(x.s), dynamics::log_schedule(0, 3, 2));
    const auto t = dynamics::tomography(rec);
    REQUIRE(t.periods.size() == rec.periods.size());
    for (std::size_t i = 0; i < t.periods.size(); ++i) {
        double sum = 0.0;
        for (double v : t.populations[i]) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(t.coherences[i][0] == doctest::Approx(std::abs(rec.rho[i].entries(0, 1))));
        CHECK(t.coherences[i][5] == doctest::Approx(std::abs(rec.rho[i].entries(2, 3))));
    }
    CHECK_THROWS_AS(dynamics::tomography({}), InvalidArgument);
}
