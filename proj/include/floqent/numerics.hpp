// Dense complex linear algebra for the 4x4 / 16x16 problem sizes.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace floqent {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Two-qubit Hilbert space and its vectorized Liouville space.
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;
using Mat16 = Eigen::Matrix<cplx, 16, 16>;
using Vec16 = Eigen::Matrix<cplx, 16, 1>;

inline constexpr cplx kI{0.0, 1.0};

} // namespace floqent

namespace floqent::numerics {

/// Largest entry modulus, ‖M‖_max.
double max_abs(const CMatrix& m);

/// max_ij |M_ij - conj(M_ji)|.
double hermiticity_defect(const CMatrix& m);

/// ‖U†U - I‖_max.
double unitarity_defect(const CMatrix& u);

struct HermitianEigen {
    RVector values;  // ascending
    CMatrix vectors; // columns, orthonormal
};

/// Eigendecomposition of a Hermitian matrix (n <= 16). The input is
/// symmetrized before decomposition; a Hermiticity defect above
/// 1e-10 * max(‖M‖_max, 1e-300) throws InvalidArgument with the defect in the message.
HermitianEigen eig_hermitian(const CMatrix& m);

struct UnitaryEigen {
    RVector phases;  // eigenphases in (-pi, pi]
    CMatrix vectors; // columns, orthonormal
};

/// Eigendecomposition of a unitary matrix via its complex Schur form; for a
/// normal matrix the Schur vectors are an orthonormal eigenbasis, including
/// inside degenerate clusters. Requires ‖U†U - I‖_max <= 1e-8.
UnitaryEigen eig_unitary(const CMatrix& u);

/// Matrix exponential (Padé scaling and squaring). Throws NumericalError on
/// non-finite input or overflow.
CMatrix expm(const CMatrix& m);

/// exp(-i h dt) for Hermitian 4x4 h; exactly unitary up to rounding.
Mat4 unitary_step(const Mat4& h, double dt);

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues in [-1e-12, 0) are clamped to zero; anything more negative
/// throws NumericalError.
CMatrix sqrtm_psd(const CMatrix& m);

/// LU solve with full pivoting. Throws NumericalError when the matrix is
/// singular at relative pivot threshold 1e-14.
CVector solve(const CMatrix& a, const CVector& b);

} // namespace floqent::numerics
