// Floquet states, quasienergies and bath transition elements.
//
// Conventions: |Psi_a(t)> = exp(-i q_a t) |a(t)>, |a(t)> = sum_K |u_a(K)> exp(-iK w t),
// quasienergies q_a folded to (-w/2, w/2].

#pragma once

#include <array>
#include <vector>

#include "floqent/model.hpp"
#include "floqent/numerics.hpp"

namespace floqent::floquet {

inline constexpr int kDefaultTimeSteps = 1024;

struct FloquetBasis {
    double omega{0.0};
    RVector quasi;             // quasienergies, (-w/2, w/2]
    Mat4 modes_t0;             // column a is |a(0)>
    int k_max{0};
    int n_t{0};
    std::vector<Mat4> fourier; // fourier[K + k_max].col(a) = |u_a(K)>
    std::array<double, 4> truncation_residual{}; // sum over |K| in {k_max-1, k_max}
    bool degenerate{false};    // two Floquet phases closer than 1e-10

    /// Fourier block for harmonic K; zero outside |K| <= k_max.
    Mat4 component(int K) const;
    bool truncation_ok(double tol = 1e-8) const;
};

struct TransitionElements {
    int k_range{0};          // elements stored for |K| <= k_range
    std::vector<Mat4> a;     // a[K + k_range](alpha, beta) = A^K_{alpha beta}

    /// A^K_{alpha beta}; zero outside the stored range.
    cplx operator()(int K, int alpha, int beta) const;
    const Mat4& block(int K) const { return a[K + k_range]; }
};

/// One-period propagator U(T), built from n_t fourth-order commutator-free
/// Magnus substeps. n_t must be a power of two, at least 256.
Mat4 monodromy(const model::SystemParams& p, int n_t = kDefaultTimeSteps);

/// Propagators U(t_j) at t_j = j T / n_t for j = 0..n_t (U(t_0) = I).
std::vector<Mat4> period_propagators(const model::SystemParams& p, int n_t);

/// ceil(6 + 2A/w + max_i |E_i| / w): the sideband spread of the drive plus the
/// offset of each state's Fourier support caused by folding into the zone.
int default_kmax(const model::SystemParams& p);

/// Floquet basis. k_max < 0 selects default_kmax and grows it by 4 until the
/// truncation residual is at most 1e-8.
FloquetBasis floquet_basis(const model::SystemParams& p, int n_t = kDefaultTimeSteps,
                           int k_max = -1);

/// A^K_{ab} = sum_L <u_a(L)| coupling |u_b(L+K)>, for |K| <= 2 k_max.
TransitionElements transition_elements(const FloquetBasis& basis, const Mat4& coupling);

struct StateTracking {
    std::array<int, 4> perm{0, 1, 2, 3}; // prev state a continues as next state perm[a]
    double min_overlap{1.0};
    bool tracking_lost{false};           // some assigned overlap below 0.5
};

/// Greedy label matching by descending |<a_prev(0)|b_next(0)>|^2; ties are
/// broken by quasienergy proximity on the zone circle.
StateTracking track_states(const FloquetBasis& prev, const FloquetBasis& next);

} // namespace floqent::floquet
