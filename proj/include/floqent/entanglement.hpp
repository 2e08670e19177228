// Wootters concurrence of two-qubit states.

#pragma once

#include <array>

#include "floqent/numerics.hpp"

namespace floqent::entanglement {

struct ConcurrenceResult {
    double value{0.0};
    std::array<double, 4> lambdas{}; // descending, clamped at 0
};

/// Density-matrix acceptance thresholds.
struct DensityTolerance {
    double hermiticity{1e-10};
    double trace{1e-10};
    double negativity{1e-8}; // smallest admissible eigenvalue is -negativity
};

/// sigma_y ⊗ sigma_y rho* sigma_y ⊗ sigma_y, conjugation taken in the
/// computational basis |00>,|01>,|10>,|11>.
Mat4 spin_flip(const Mat4& rho);

/// Concurrence C = max(0, l1 - l2 - l3 - l4) with l_i the eigenvalues of
/// R = sqrt(sqrt(rho) rho~ sqrt(rho)) in decreasing order. rho must be a
/// density matrix in the computational basis; small negative eigenvalues
/// (within tol.negativity) are clamped before the square roots.
ConcurrenceResult concurrence(const Mat4& rho, const DensityTolerance& tol = {});

/// Concurrence of the pure state |psi><psi| (psi need not be normalized).
double concurrence_pure(const Vec4& psi);

} // namespace floqent::entanglement
