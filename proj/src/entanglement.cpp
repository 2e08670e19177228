#include "floqent/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "floqent/errors.hpp"

namespace floqent::entanglement {

namespace {

Mat4 sigma_yy() {
    // sigma_y ⊗ sigma_y in the computational basis.
    Mat4 s = Mat4::Zero();
    s(0, 3) = -1.0;
    s(1, 2) = 1.0;
    s(2, 1) = 1.0;
    s(3, 0) = -1.0;
    return s;
}

Mat4 validated_psd(const Mat4& rho, const DensityTolerance& tol) {
    if (!rho.allFinite()) {
        throw InvalidArgument("concurrence: density matrix has non-finite entries");
    }
    const double herm = numerics::hermiticity_defect(rho);
    if (herm > tol.hermiticity) {
        std::ostringstream os;
        os << "concurrence: density matrix is not Hermitian (defect " << herm << ")";
        throw InvalidArgument(os.str());
    }
    const double trace_err = std::abs(rho.trace() - cplx(1.0));
    if (trace_err > tol.trace) {
        std::ostringstream os;
        os << "concurrence: density matrix trace differs from 1 by " << trace_err;
        throw InvalidArgument(os.str());
    }
    const auto eig = numerics::eig_hermitian(rho);
    if (eig.values(0) < -tol.negativity) {
        std::ostringstream os;
        os << "concurrence: density matrix has negative eigenvalue " << eig.values(0);
        throw InvalidArgument(os.str());
    }
    const RVector clamped = eig.values.cwiseMax(0.0);
    return eig.vectors * clamped.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
}

} // namespace

Mat4 spin_flip(const Mat4& rho) {
    const Mat4 s = sigma_yy();
    return s * rho.conjugate() * s;
}

ConcurrenceResult concurrence(const Mat4& rho, const DensityTolerance& tol) {
    const Mat4 psd = validated_psd(rho, tol);
    const CMatrix root = numerics::sqrtm_psd(psd);
    const CMatrix inner = root * spin_flip(psd) * root;
    const CMatrix r = numerics::sqrtm_psd(0.5 * (inner + inner.adjoint()));
    const auto eig = numerics::eig_hermitian(r);

    ConcurrenceResult out;
    for (int k = 0; k < 4; ++k) {
        out.lambdas[k] = std::max(eig.values(k), 0.0);
    }
    std::sort(out.lambdas.begin(), out.lambdas.end(), std::greater<>());
    const double c = out.lambdas[0] - out.lambdas[1] - out.lambdas[2] - out.lambdas[3];
    out.value = std::clamp(c, 0.0, 1.0);
    return out;
}

double concurrence_pure(const Vec4& psi) {
    const double norm2 = psi.squaredNorm();
    if (!(norm2 > 0.0)) {
        throw InvalidArgument("concurrence_pure: zero state vector");
    }
    // C = |<psi| sigma_y x sigma_y |psi*>| / <psi|psi>
    const cplx overlap = psi.dot(sigma_yy() * psi.conjugate());
    return std::min(1.0, std::abs(overlap) / norm2);
}

} // namespace floqent::entanglement
