#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>

#include "floqent/errors.hpp"
#include "floqent/numerics.hpp"
#include "support.hpp"

using namespace floqent;
using namespace testsupport;

namespace {

// det(H - x I) is real for Hermitian H; its sign changes bracket each eigenvalue.
double char_poly(const CMatrix& h, double x) {
    return (h - x * CMatrix::Identity(h.rows(), h.cols())).determinant().real();
}

std::vector<double> roots_by_bisection(const CMatrix& h) {
    const double bound = h.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
    const int grid = 20000;
    std::vector<double> roots;
    double x0 = -bound;
    double f0 = char_poly(h, x0);
    for (int k = 1; k <= grid; ++k) {
        const double x1 = -bound + 2.0 * bound * k / grid;
        const double f1 = char_poly(h, x1);
        if (f0 == 0.0) roots.push_back(x0);
        else if (f0 * f1 < 0.0) {
            double lo = x0, hi = x1, flo = f0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = char_poly(h, mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

// Truncated Taylor series with scaling and squaring, independent of Eigen's Padé.
CMatrix expm_taylor(const CMatrix& a) {
    int s = std::max(0, static_cast<int>(std::ceil(std::log2(a.cwiseAbs().rowwise().sum().maxCoeff() + 1e-300))) + 1);
    const CMatrix b = a / std::pow(2.0, s);
    CMatrix term = CMatrix::Identity(a.rows(), a.cols());
    CMatrix sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * b / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < s; ++i) sum = sum * sum;
    return sum;
}

} // namespace

TEST_CASE("eig_hermitian agrees with bisection on the characteristic polynomial") {
    for (int trial = 0; trial < 5; ++trial) {
        const CMatrix h = random_hermitian(4);
        const auto e = numerics::eig_hermitian(h);
        const auto roots = roots_by_bisection(h);
        REQUIRE(roots.size() == 4);
        for (int k = 0; k < 4; ++k) CHECK(e.values(k) == doctest::Approx(roots[k]).epsilon(1e-10));
        CHECK((h * e.vectors - e.vectors * e.values.asDiagonal()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(numerics::unitarity_defect(e.vectors) < 1e-12);
    }
}

TEST_CASE("eig_hermitian rejects non-Hermitian input and handles degeneracy") {
    CMatrix m = random_hermitian(4);
    m(0, 1) += 1e-6;
    CHECK_THROWS_AS(numerics::eig_hermitian(m), InvalidArgument);

    const CMatrix u = random_unitary(4);
    RVector d(4);
    d << -1.0, 2.0, 2.0, 5.0;
    const CMatrix h = u * d.asDiagonal() * u.adjoint();
    const auto e = numerics::eig_hermitian(0.5 * (h + h.adjoint()));
    for (int k = 0; k < 4; ++k) CHECK(e.values(k) == doctest::Approx(d(k)).epsilon(1e-12));
    CHECK(numerics::unitarity_defect(e.vectors) < 1e-12);
}

TEST_CASE("eig_unitary recovers prescribed phases, including a degenerate pair") {
    const CMatrix v = random_unitary(4);
    const std::array<double, 4> phases{-2.9, 0.3, 0.3, std::numbers::pi};
    CVector diag(4);
    for (int k = 0; k < 4; ++k) diag(k) = std::exp(kI * phases[k]);
    const CMatrix u = v * diag.asDiagonal() * v.adjoint();
    const auto e = numerics::eig_unitary(u);
    std::vector<double> got(e.phases.data(), e.phases.data() + 4);
    std::sort(got.begin(), got.end());
    for (int k = 0; k < 4; ++k) CHECK(got[k] == doctest::Approx(phases[k]).epsilon(1e-12));
    CHECK(numerics::unitarity_defect(e.vectors) < 1e-10);
    CHECK((u * e.vectors - e.vectors * e.phases.unaryExpr([](double p) { return std::exp(kI * p); }).asDiagonal())
              .cwiseAbs()
              .maxCoeff() < 1e-10);

    CMatrix bad = u;
    bad(0, 0) *= 1.001;
    CHECK_THROWS(numerics::eig_unitary(bad));
}

TEST_CASE("expm matches an independent Taylor series and the diagonal case") {
    for (int n : {4, 16}) {
        const CMatrix a = 0.7 * random_complex(n);
        const CMatrix ref = expm_taylor(a);
        CHECK((numerics::expm(a) - ref).cwiseAbs().maxCoeff() < 1e-11 * ref.cwiseAbs().maxCoeff());
    }
    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = kI * 2.0;
    d(2, 2) = -3.0;
    const CMatrix e = numerics::expm(d);
    CHECK(std::abs(e(0, 0) - std::exp(1.0)) < 1e-14);
    CHECK(std::abs(e(1, 1) - std::exp(kI * 2.0)) < 1e-14);
    CHECK(std::abs(e(2, 2) - std::exp(-3.0)) < 1e-15);

    CMatrix nan = CMatrix::Zero(2, 2);
    nan(0, 1) = std::nan("");
    CHECK_THROWS_AS(numerics::expm(nan), NumericalError);
}

TEST_CASE("unitary_step reproduces the Pauli rotation closed form") {
    // exp(-i dt n.sigma) = cos(dt) I - i sin(dt) n.sigma, lifted to qubit 1 of the pair.
    const double nx = 0.48, ny = -0.6, nz = 0.64;
    Eigen::Matrix2cd s;
    s << nz, cplx(nx, -ny), cplx(nx, ny), -nz;
    const Mat4 h = Eigen::kroneckerProduct(s, Eigen::Matrix2cd::Identity()).eval();
    const double dt = 0.37;
    const Eigen::Matrix2cd r = std::cos(dt) * Eigen::Matrix2cd::Identity() - kI * std::sin(dt) * s;
    const Mat4 ref = Eigen::kroneckerProduct(r, Eigen::Matrix2cd::Identity()).eval();
    CHECK((numerics::unitary_step(h, dt) - ref).cwiseAbs().maxCoeff() < 1e-14);

    const Mat4 hr = random_hermitian(4);
    CHECK(numerics::unitarity_defect(numerics::unitary_step(hr, 12.3)) < 1e-13);
}

TEST_CASE("sqrtm_psd squares back and rejects negative spectra") {
    const Mat4 rho = random_density(3);
    const CMatrix s = numerics::sqrtm_psd(rho);
    CHECK((s * s - rho).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(numerics::hermiticity_defect(s) < 1e-14);

    Mat4 neg = Mat4::Identity();
    neg(3, 3) = -1e-6;
    CHECK_THROWS_AS(numerics::sqrtm_psd(neg), NumericalError);
    neg(3, 3) = -1e-13;
    CHECK(numerics::sqrtm_psd(neg)(3, 3) == cplx(0.0));
}

TEST_CASE("solve returns a small residual and detects singular systems") {
    const CMatrix a = random_complex(16);
    CVector b(16);
    for (int i = 0; i < 16; ++i) b(i) = gaussian_c();
    const CVector x = numerics::solve(a, b);
    CHECK((a * x - b).cwiseAbs().maxCoeff() < 1e-12);

    CMatrix sing = random_complex(4);
    sing.row(3) = sing.row(0) + sing.row(1);
    CHECK_THROWS_AS(numerics::solve(sing, CVector::Ones(4)), NumericalError);
}
