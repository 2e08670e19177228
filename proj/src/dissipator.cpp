#include "floqent/dissipator.hpp"

#include <cmath>

#include "floqent/errors.hpp"

namespace floqent::dissipator {

namespace {
constexpr double kTailWarn = 1e-10;
}

double spectral_density(double x, const BathFunctions& bath) {
    return bath.gamma_bath * x * std::exp(-std::abs(x) / bath.omega_c);
}

double g_coeff(double x, const BathFunctions& bath) {
    if (std::abs(x) <= 1e-9 * bath.T_b) {
        return bath.gamma_bath * bath.T_b * std::exp(-std::abs(x) / bath.omega_c);
    }
    const double denom = std::expm1(x / bath.T_b);
    if (std::isinf(denom)) return 0.0;
    return spectral_density(x, bath) / denom;
}

RateTensor rate_tensor(const floquet::FloquetBasis& basis, const floquet::TransitionElements& elems,
                       const BathFunctions& bath) {
    const int kr = elems.k_range;
    const double w = basis.omega;
    RateTensor out;
    out.q_max = kr;
    out.R.assign(256, cplx(0.0));

    // g(q_aa' - K w) for every (a, a', K), K being the Fourier index of A^K.
    std::vector<double> g(16 * (2 * kr + 1));
    auto g_at = [&](int a, int a2, int K) -> double& { return g[(4 * a + a2) * (2 * kr + 1) + K + kr]; };
    for (int a = 0; a < 4; ++a)
        for (int a2 = 0; a2 < 4; ++a2)
            for (int K = -kr; K <= kr; ++K)
                g_at(a, a2, K) = g_coeff(basis.quasi(a) - basis.quasi(a2) - K * w, bath);

    double total = 0.0;
    double tail = 0.0;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int a2 = 0; a2 < 4; ++a2) {
                for (int b2 = 0; b2 < 4; ++b2) {
                    cplx acc = 0.0;
                    for (int K = -kr; K <= kr; ++K) {
                        const cplx term = g_at(a, a2, K) * elems.block(K)(a, a2)
                                          * std::conj(elems.block(K)(b, b2));
                        acc += term;
                        total += std::abs(term);
                        if (std::abs(K) >= kr - 1) tail += std::abs(term);
                    }
                    out.R[64 * a + 16 * b + 4 * a2 + b2] = acc;
                }
            }
        }
    }
    out.tail_fraction = total > 0.0 ? tail / total : 0.0;
    out.truncation_warning = out.tail_fraction > kTailWarn;

    out.L_avg.setZero();
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int a2 = 0; a2 < 4; ++a2) {
                for (int b2 = 0; b2 < 4; ++b2) {
                    cplx v = -out.at(a, b, a2, b2) - std::conj(out.at(b, a, b2, a2));
                    if (b == b2) {
                        for (int n = 0; n < 4; ++n) v += out.at(n, n, a2, a);
                    }
                    if (a == a2) {
                        for (int n = 0; n < 4; ++n) v += std::conj(out.at(n, n, b2, b));
                    }
                    out.L_avg(vec_index(a, b), vec_index(a2, b2)) = v;
                }
            }
        }
    }
    return out;
}

} // namespace floqent::dissipator
