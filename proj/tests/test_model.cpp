#include <doctest.h>

#include <cmath>

#include "floqent/errors.hpp"
#include "floqent/model.hpp"

using namespace floqent;

TEST_CASE("H0 matches the hand-written matrix in the computational basis") {
    model::SystemParams p;
    p.eps0 = 7.0;
    const Mat4 h = model::build_h0(p);
    Mat4 ref = Mat4::Zero();
    ref(0, 0) = -7.0;
    ref(3, 3) = 7.0;
    ref(0, 2) = ref(2, 0) = ref(1, 3) = ref(3, 1) = -0.5 * p.delta1;
    ref(0, 1) = ref(1, 0) = ref(2, 3) = ref(3, 2) = -0.5 * p.delta2;
    ref(1, 2) = ref(2, 1) = -0.5 * p.J;
    CHECK((h - ref).cwiseAbs().maxCoeff() == 0.0);

    const Mat4 v = model::build_drive_op();
    CHECK(v(0, 0) == cplx(1.0));
    CHECK(v(3, 3) == cplx(-1.0));
    CHECK(v(1, 1) == cplx(0.0));
    CHECK((model::build_coupling_op() - v).cwiseAbs().maxCoeff() == 0.0);

    p.A = 3.0;
    const double t = 0.123;
    CHECK(model::drive_envelope(t, p) == doctest::Approx(-3.0 * std::cos(p.omega * t)));
    CHECK((model::drive(t, p) - model::drive_envelope(t, p) * v).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("bare states are eigenvectors when the tunnelling terms vanish") {
    model::SystemParams p;
    p.eps0 = 30.0;
    p.delta1 = 1e-300;
    p.delta2 = 0.0;
    const Mat4 h = model::build_h0(p);
    const double expect[4] = {-30.0, 0.5 * p.J, -0.5 * p.J, 30.0};
    const model::BareState states[4] = {model::BareState::S0, model::BareState::EMinus, model::BareState::EPlus,
                                        model::BareState::S1};
    for (int k = 0; k < 4; ++k) {
        const Vec4 b = model::bare_vector(states[k]);
        CHECK((h * b - expect[k] * b).norm() < 1e-12);
    }
}

TEST_CASE("static spectrum: ordering, phase convention, character") {
    const auto s = model::static_spectrum(model::default_params(4.1, 0.0));
    for (int k = 0; k < 3; ++k) CHECK(s.energies(k) < s.energies(k + 1));
    CHECK(s.character[0] == model::BareState::S0);
    CHECK(s.character[1] == model::BareState::EMinus);
    CHECK(s.character[2] == model::BareState::EPlus);
    CHECK(s.character[3] == model::BareState::S1);
    for (int k = 0; k < 4; ++k) {
        Eigen::Index idx = 0;
        s.states.col(k).cwiseAbs().maxCoeff(&idx);
        CHECK(std::abs(s.states(idx, k).imag()) < 1e-14);
        CHECK(s.states(idx, k).real() > 0.0);
    }
    CHECK(s.state_concurrences[1] > 0.99);
    CHECK(s.state_concurrences[0] < 0.01);
}

TEST_CASE("ground-state concurrence crosses over at |eps0| = |J|/2") {
    const double half_j = 12.5;
    for (int i = -200; i <= 200; ++i) {
        const double eps0 = 0.3 * i;
        model::SystemParams p;
        p.eps0 = eps0;
        const double c = model::static_spectrum(p).state_concurrences[0];
        if (std::abs(eps0) <= half_j - 2.5) CHECK(c > 0.99);
        if (std::abs(eps0) >= half_j + 2.5) CHECK(c < 0.05);
    }
}

TEST_CASE("resonance classification") {
    SUBCASE("SS at eps0/omega = 3") {
        const auto tags = model::classify_resonances(model::default_params(3.0, 0.0), 0.05 * 10.0);
        REQUIRE(tags.size() == 1);
        CHECK(tags[0].kind == model::ResonanceKind::SS);
        CHECK(tags[0].m == 6);
        CHECK(tags[0].detuning == doctest::Approx(0.0));
        CHECK(tags[0].states[0] == model::BareState::S0);
        CHECK(tags[0].states[1] == model::BareState::S1);
    }
    SUBCASE("SE at eps0/omega = 3.25: eps0 + J/2 = 2 omega") {
        const auto tags = model::classify_resonances(model::default_params(3.25, 0.0), 0.05 * 10.0);
        REQUIRE(tags.size() == 1);
        CHECK(tags[0].kind == model::ResonanceKind::SE);
        CHECK(tags[0].m == 2);
        CHECK(tags[0].states[1] == model::BareState::EMinus);
    }
    SUBCASE("off resonance and ordering by detuning") {
        CHECK(model::classify_resonances(model::default_params(3.1, 0.0), 0.05 * 10.0).empty());
        const auto tags = model::classify_resonances(model::default_params(4.1, 0.0), 6.0);
        REQUIRE(!tags.empty());
        CHECK(tags[0].kind == model::ResonanceKind::SE);
        CHECK(tags[0].m == 3);
        for (std::size_t i = 1; i < tags.size(); ++i)
            CHECK(std::abs(tags[i - 1].detuning) <= std::abs(tags[i].detuning));
    }
    CHECK_THROWS_AS(model::classify_resonances(model::SystemParams{.omega = 0.0}, 1.0), InvalidArgument);
}

TEST_CASE("zone folding and lowest-order quasienergies") {
    CHECK(model::fold_to_zone(5.0, 10.0) == doctest::Approx(5.0));
    CHECK(model::fold_to_zone(-5.0, 10.0) == doctest::Approx(5.0));
    CHECK(model::fold_to_zone(12.5, 10.0) == doctest::Approx(2.5));
    CHECK(model::fold_to_zone(-41.0, 10.0) == doctest::Approx(-1.0));
    const auto q = model::perturbative_quasienergies(model::default_params(4.1, 0.0));
    CHECK(q[0] == doctest::Approx(-1.0));
    CHECK(q[1] == doctest::Approx(-2.5));
    CHECK(q[2] == doctest::Approx(2.5));
    CHECK(q[3] == doctest::Approx(1.0));
}

TEST_CASE("parameter validation") {
    model::SystemParams p;
    CHECK_NOTHROW(p.validate());
    p.T_b = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    p.A = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    p.eps0 = std::nan("");
    CHECK_THROWS_AS(model::static_spectrum(p), InvalidArgument);
}
