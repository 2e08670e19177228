// Shared fixtures for the unit tests: seeded random matrices and small oracles.

#pragma once

#include <cstdlib>
#include <random>

#include "floqent/numerics.hpp"

namespace testsupport {

using namespace floqent;

// Seed can be overridden with FLOQENT_TEST_SEED to explore other samples.
inline std::mt19937_64& rng() {
    static std::mt19937_64 gen([] {
        const char* s = std::getenv("FLOQENT_TEST_SEED");
        return s ? std::strtoull(s, nullptr, 10) : 20240611ULL;
    }());
    return gen;
}

inline cplx gaussian_c() {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(rng()), n(rng())};
}

inline CMatrix random_complex(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = gaussian_c();
    return m;
}

inline CMatrix random_hermitian(int n) {
    const CMatrix m = random_complex(n);
    return 0.5 * (m + m.adjoint());
}

inline CMatrix random_unitary(int n) {
    Eigen::HouseholderQR<CMatrix> qr(random_complex(n));
    return qr.householderQ() * CMatrix::Identity(n, n);
}

// Full-rank (or rank-r) density matrix from a Ginibre sample.
inline Mat4 random_density(int rank = 4) {
    CMatrix g = random_complex(4).leftCols(rank);
    Mat4 rho = g * g.adjoint();
    return rho / rho.trace().real();
}

inline Vec4 random_pure() {
    Vec4 v;
    for (int i = 0; i < 4; ++i) v(i) = gaussian_c();
    return v.normalized();
}

} // namespace testsupport
