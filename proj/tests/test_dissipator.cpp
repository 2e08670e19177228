#include <doctest.h>

#include <cmath>

#include "floqent/dissipator.hpp"
#include "floqent/dynamics.hpp"
#include "floqent/floquet.hpp"
#include "floqent/model.hpp"

using namespace floqent;
using dissipator::vec_index;

namespace {

struct Setup {
    model::SystemParams p;
    model::StaticSpectrum s;
    floquet::FloquetBasis b;
    floquet::TransitionElements e;
    dissipator::BathFunctions bath;
    dissipator::RateTensor r;
};

Setup setup(double eps, double a) {
    Setup x;
    x.p = model::default_params(eps, a);
    x.s = model::static_spectrum(x.p);
    x.b = floquet::floquet_basis(x.p);
    x.e = floquet::transition_elements(x.b, model::build_coupling_op());
    x.bath = dissipator::BathFunctions::from(x.p);
    x.r = dissipator::rate_tensor(x.b, x.e, x.bath);
    return x;
}

// Floquet index whose t = 0 mode matches H_0 eigenstate k.
int floquet_of(const Setup& x, int k) {
    Eigen::Index idx = 0;
    (x.b.modes_t0.adjoint() * x.s.states).col(k).cwiseAbs().maxCoeff(&idx);
    return static_cast<int>(idx);
}

} // namespace

TEST_CASE("g coefficient: detailed balance, positivity and the x -> 0 limit") {
    const dissipator::BathFunctions bath;
    for (double x = -30.0; x <= 30.0; x += 0.173) {
        const double gp = dissipator::g_coeff(x, bath);
        const double gm = dissipator::g_coeff(-x, bath);
        CHECK(gp >= 0.0);
        CHECK(gp / gm == doctest::Approx(std::exp(-x / bath.T_b)).epsilon(1e-12));
    }
    const double limit = bath.gamma_bath * bath.T_b;
    CHECK(dissipator::g_coeff(0.0, bath) == doctest::Approx(limit));
    CHECK(dissipator::g_coeff(1e-7 * bath.T_b, bath) == doctest::Approx(limit).epsilon(1e-6));
    CHECK(dissipator::g_coeff(-1e-7 * bath.T_b, bath) == doctest::Approx(limit).epsilon(1e-6));
    // Zero-temperature side: emission at rate J(|x|).
    CHECK(dissipator::g_coeff(-5.0, bath) == doctest::Approx(-dissipator::spectral_density(-5.0, bath)).epsilon(1e-12));
    CHECK(dissipator::g_coeff(1e4, bath) == 0.0);
    CHECK(dissipator::spectral_density(-2.0, bath) == -dissipator::spectral_density(2.0, bath));
}

TEST_CASE("A = 0 rates reduce to the golden rule between H0 eigenstates") {
    const auto x = setup(3.25, 0.0);
    const Mat4 c = model::build_coupling_op();
    for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
            if (k == l) continue;
            const cplx m = x.s.states.col(k).dot(c * x.s.states.col(l));
            const double golden = dissipator::g_coeff(x.s.energies(k) - x.s.energies(l), x.bath) * std::norm(m);
            const int a = floquet_of(x, k);
            const int b = floquet_of(x, l);
            // Absolute tolerance: Fourier components that vanish exactly at A = 0
            // carry ~1e-16 rounding, which leaves rates of order 1e-32.
            CHECK(std::abs(x.r.at(a, a, b, b).real() - golden) <= 1e-9 * std::max(golden, 1e-20));
        }
    }
}

TEST_CASE("averaged generator preserves trace and Hermiticity") {
    const auto x = setup(3.0, 3.8);
    const double scale = x.r.L_avg.cwiseAbs().maxCoeff();
    for (int a2 = 0; a2 < 4; ++a2) {
        for (int b2 = 0; b2 < 4; ++b2) {
            cplx tr = 0.0;
            for (int a = 0; a < 4; ++a) tr += x.r.L_avg(vec_index(a, a), vec_index(a2, b2));
            CHECK(std::abs(tr) < 1e-13 * scale);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    CHECK(std::abs(x.r.L_avg(vec_index(a, b), vec_index(a2, b2))
                                   - std::conj(x.r.L_avg(vec_index(b, a), vec_index(b2, a2))))
                          < 1e-13 * scale);
        }
    }
    CHECK_FALSE(x.r.truncation_warning);
}

TEST_CASE("zeroth Fourier coefficient of the full generator equals the averaged generator") {
    for (auto [eps, a] : {std::pair{3.0, 3.8}, std::pair{4.1, 1.7}}) {
        const auto x = setup(eps, a);
        const Mat16 l0 = dynamics::oracle::fourier_generator(x.b, x.e, x.bath, 0);
        CHECK((l0 - x.r.L_avg).cwiseAbs().maxCoeff() <= 1e-12 * x.r.L_avg.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("A = 0 steady state is the Gibbs state of H0") {
    for (double eps : {0.5, 3.0, 4.1}) {
        const auto x = setup(eps, 0.0);
        const auto ss = dynamics::steady_state(x.r, x.b, x.s);
        RVector w = (-(x.s.energies.array() - x.s.energies(0)) / x.p.T_b).exp();
        w /= w.sum();
        for (int k = 0; k < 4; ++k) CHECK(std::abs(ss.rho.entries(k, k).real() - w(k)) <= 1e-6);
    }
}
