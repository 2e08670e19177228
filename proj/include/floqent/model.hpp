// Two coupled, longitudinally driven qubits and their static spectrum.
//
// Units: hbar = k_B = 1, energies in units of Delta_1. Basis order is
// |00>,|01>,|10>,|11> with qubit 1 the most significant factor.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "floqent/numerics.hpp"

namespace floqent::model {

struct SystemParams {
    double eps0{0.0};
    double delta1{1.0};
    double delta2{1.5};
    double J{-25.0};
    double A{0.0};
    double omega{10.0};
    double gamma_bath{0.001};
    double omega_c{333.0};
    double T_b{0.0467};

    double period() const;
    /// Throws InvalidArgument when any physical invariant is violated.
    void validate() const;
};

/// Default parameters with eps0 and A given in units of omega.
SystemParams default_params(double eps0_over_omega = 0.0, double A_over_omega = 0.0);

/// Single-qubit operator `op` placed on qubit 1 or 2 of the two-qubit space.
Mat4 on_qubit(int qubit, const Eigen::Matrix2cd& op);

Mat4 build_h0(const SystemParams& p);

/// Time-independent part of the drive: V(t) = -A cos(wt) * drive_operator().
Mat4 build_drive_op();
Mat4 drive(double t, const SystemParams& p);
/// Scalar envelope f(t) with V(t) = f(t) * drive_operator().
double drive_envelope(double t, const SystemParams& p);

/// System-bath coupling operator (sigma_z^(1) + sigma_z^(2)) / 2.
Mat4 build_coupling_op();

/// Uncoupled (Delta_i -> 0) eigenstates: |s0>=|00>, |e->, |e+>, |s1>=|11>.
enum class BareState { S0 = 0, EMinus = 1, EPlus = 2, S1 = 3 };
std::string to_string(BareState s);
Vec4 bare_vector(BareState s);

struct StaticSpectrum {
    RVector energies;                        // E_0 .. E_3 ascending
    Mat4 states;                             // column k is |E_k>
    std::array<double, 4> state_concurrences{};
    std::array<BareState, 4> character{};    // bare state each |E_k> is closest to
};

/// Eigenvectors are phase-fixed so that their largest-modulus component is
/// real and positive.
StaticSpectrum static_spectrum(const SystemParams& p);

enum class ResonanceKind { SS, SE, EE, None };
std::string to_string(ResonanceKind k);

struct ResonanceTag {
    ResonanceKind kind{ResonanceKind::None};
    int m{0};
    // Residual of the resonance condition: 2eps0 - m w (SS), eps0 +/- J/2 - m w (SE),
    // J - m w (EE).
    double detuning{0.0};
    // The pair of bare states whose gap matches m w; for SE the pair holding |s0>.
    std::array<BareState, 2> states{BareState::S0, BareState::S0};
};

inline constexpr double kDefaultResonanceWindowOverOmega = 0.6;

/// All multiphoton resonance conditions met within `window` (energy units).
/// Tags are ordered by |detuning|.
std::vector<ResonanceTag> classify_resonances(const SystemParams& p, double window);

/// Fold an energy into the quasienergy zone (-w/2, w/2].
double fold_to_zone(double energy, double omega);

/// Lowest-order (Delta_i/w -> 0) quasienergies in bare-state order
/// s0, e-, e+, s1: -eps0, J/2, -J/2, +eps0, each folded to (-w/2, w/2].
std::array<double, 4> perturbative_quasienergies(const SystemParams& p);

} // namespace floqent::model
