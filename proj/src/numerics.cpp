#include "floqent/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "floqent/errors.hpp"

namespace floqent::numerics {

namespace {

constexpr double kHermitianRelTol = 1e-10;
constexpr double kUnitaryTol = 1e-8;
constexpr double kPsdClamp = 1e-12;
constexpr double kPivotRelTol = 1e-14;

void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream os;
        os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw InvalidArgument(os.str());
    }
}

} // namespace

double max_abs(const CMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const CMatrix& m) {
    return max_abs(m - m.adjoint());
}

double unitarity_defect(const CMatrix& u) {
    return max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
}

HermitianEigen eig_hermitian(const CMatrix& m) {
    require_square(m, "eig_hermitian");
    if (m.rows() > 16) {
        throw InvalidArgument("eig_hermitian: dimension above 16 is not supported");
    }
    const double scale = std::max(max_abs(m), 1e-300);
    const double defect = hermiticity_defect(m);
    if (defect > kHermitianRelTol * scale) {
        std::ostringstream os;
        os << "eig_hermitian: input is not Hermitian, max|M - M^H| = " << defect
           << " (norm " << scale << ")";
        throw InvalidArgument(os.str());
    }
    const CMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eig_hermitian: eigensolver did not converge");
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

UnitaryEigen eig_unitary(const CMatrix& u) {
    require_square(u, "eig_unitary");
    const double defect = unitarity_defect(u);
    if (!(defect <= kUnitaryTol)) {
        std::ostringstream os;
        os << "eig_unitary: input is not unitary, ‖U^H U - I‖_max = " << defect;
        throw InvalidArgument(os.str());
    }
    Eigen::ComplexSchur<CMatrix> schur(u);
    if (schur.info() != Eigen::Success) {
        throw NumericalError("eig_unitary: Schur decomposition did not converge");
    }
    const CMatrix& t = schur.matrixT();
    UnitaryEigen out;
    out.phases.resize(u.rows());
    for (Eigen::Index k = 0; k < u.rows(); ++k) {
        double phase = std::arg(t(k, k));
        if (phase <= -std::numbers::pi) {
            phase += 2.0 * std::numbers::pi;
        }
        out.phases(k) = phase;
    }
    out.vectors = schur.matrixU();
    return out;
}

CMatrix expm(const CMatrix& m) {
    require_square(m, "expm");
    if (!m.allFinite()) {
        throw NumericalError("expm: non-finite input");
    }
    CMatrix result = m.exp();
    if (!result.allFinite()) {
        throw NumericalError("expm: overflow");
    }
    return result;
}

Mat4 unitary_step(const Mat4& h, double dt) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(h);
    const Eigen::Vector4cd phases = (es.eigenvalues().cast<cplx>() * cplx(0.0, -dt)).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix sqrtm_psd(const CMatrix& m) {
    const HermitianEigen eig = eig_hermitian(m);
    RVector roots(eig.values.size());
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const double v = eig.values(k);
        if (v < -kPsdClamp) {
            std::ostringstream os;
            os << "sqrtm_psd: matrix is not positive semidefinite (eigenvalue " << v << ")";
            throw NumericalError(os.str());
        }
        roots(k) = std::sqrt(std::max(v, 0.0));
    }
    CMatrix r = eig.vectors * roots.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
    return 0.5 * (r + r.adjoint());
}

CVector solve(const CMatrix& a, const CVector& b) {
    require_square(a, "solve");
    if (b.size() != a.rows()) {
        throw InvalidArgument("solve: right-hand side has the wrong length");
    }
    Eigen::FullPivLU<CMatrix> lu(a);
    lu.setThreshold(kPivotRelTol);
    if (!lu.isInvertible()) {
        std::ostringstream os;
        os << "solve: singular matrix (rank " << lu.rank() << " of " << a.rows() << ")";
        throw NumericalError(os.str());
    }
    return lu.solve(b);
}

} // namespace floqent::numerics
