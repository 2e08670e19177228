// Two-state reduction near a multiphoton resonance.
//
// Photon labels follow the bath-energy convention: the n-photon term of a
// transition b -> a is weighted by g(q~_a - q~_b + n w), where q~ are the
// quasienergies unfolded to the replica closest to the matching H_0 level.

#pragma once

#include <array>
#include <map>
#include <optional>

#include "floqent/dissipator.hpp"
#include "floqent/floquet.hpp"
#include "floqent/model.hpp"

namespace floqent::twolevel {

struct StatePair {
    int a{0};      // Floquet partner of the higher-energy H_0 state
    int b{0};      // Floquet partner of the lower-energy H_0 state
    int h0_a{0};
    int h0_b{0};
    double overlap_a{0.0}; // |<a(0)|E_h0_a>|^2
    double overlap_b{0.0};
};

/// Floquet states overlapping most with the two H_0 eigenstates involved in `tag`.
/// Throws NumericalError if either overlap is below 0.5 or both map to one state.
StatePair select_pair(const floquet::FloquetBasis& basis, const model::StaticSpectrum& spectrum,
                      const model::ResonanceTag& tag);

struct PhotonRates {
    StatePair pair;
    std::map<int, double> rates; // n -> Gamma_r^(n)
    double total{0.0};
    double pop_a{0.0};           // Pauli steady state restricted to the pair
    double pop_b{0.0};
    int unfold_a{0};             // q~_a = q_a + unfold_a * w
    int unfold_b{0};
    double tail_fraction{0.0};   // share of |n| in {q_max-1, q_max}
    bool two_level_valid{false};

    double rate(int n) const;
    /// Photon index of the largest term.
    int dominant() const;
};

/// Gamma_r^(n) = 2 (g(q~_ab + n w) |A~^(-n)_ab|^2 + g(q~_ba + n w) |A~^(-n)_ba|^2), |n| <= q_max.
/// When the full steady-state Floquet populations are supplied, the result is
/// marked two-level-valid iff both states outside the pair hold < 0.05.
PhotonRates photon_rates(const floquet::FloquetBasis& basis, const floquet::TransitionElements& elems,
                         const dissipator::BathFunctions& bath, const model::StaticSpectrum& spectrum,
                         const StatePair& pair,
                         const std::optional<std::array<double, 4>>& steady_floquet_populations = {});

/// Steady populations of the Pauli equation dP_a/dt = sum_b 2R_{aa,bb} P_b - 2R_{bb,aa} P_a
/// over all four Floquet states. Throws NumericalError when the rate graph
/// does not have exactly one closed class.
std::array<double, 4> pauli_steady(const dissipator::RateTensor& rates);

} // namespace floqent::twolevel
