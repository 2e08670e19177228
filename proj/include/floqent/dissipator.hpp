// Ohmic bath functions and the period-averaged Floquet-Markov rates.

#pragma once

#include <vector>

#include "floqent/floquet.hpp"
#include "floqent/model.hpp"
#include "floqent/numerics.hpp"

namespace floqent::dissipator {

struct BathFunctions {
    double gamma_bath{0.001};
    double omega_c{333.0};
    double T_b{0.0467};

    static BathFunctions from(const model::SystemParams& p) {
        return {p.gamma_bath, p.omega_c, p.T_b};
    }
};

/// J(x) = gamma x exp(-|x| / omega_c), odd in x.
double spectral_density(double x, const BathFunctions& bath);

/// g(x) = J(x) n_th(x) with n_th(x) = 1 / (exp(x / T) - 1). For |x| <= 1e-9 T
/// the removable singularity is replaced by its limit gamma T exp(-|x| / omega_c).
/// g(x) >= 0 everywhere and g(x) / g(-x) = exp(-x / T).
double g_coeff(double x, const BathFunctions& bath);

/// Row/column index of rho_{ab} in the 16-component vectorized density matrix.
constexpr int vec_index(int a, int b) { return 4 * a + b; }

struct RateTensor {
    int q_max{0};
    std::vector<cplx> R; // R[vec_index(vec_index(a, b), ...)], see at()
    Mat16 L_avg;         // period-averaged generator, rows (a,b), columns (a',b')
    double tail_fraction{0.0};
    bool truncation_warning{false};

    cplx at(int a, int b, int a2, int b2) const { return R[64 * a + 16 * b + 4 * a2 + b2]; }
};

/// R_{ab,a'b'} = sum_Q g(q_a - q_a' + Q w) A^{-Q}_{aa'} conj(A^{-Q}_{bb'}); Q counts the
/// drive quanta released to the bath, so the matrix element at bath energy
/// q_aa' + Q w is the K = -Q Fourier component of <a(t)|A|a'(t)>.
/// L_{ab,a'b'} = d_{bb'} sum_n R_{nn,a'a} + d_{aa'} sum_n conj(R_{nn,b'b})
///             - R_{ab,a'b'} - conj(R_{ba,b'a'}).
RateTensor rate_tensor(const floquet::FloquetBasis& basis, const floquet::TransitionElements& elems,
                       const BathFunctions& bath);

} // namespace floqent::dissipator
