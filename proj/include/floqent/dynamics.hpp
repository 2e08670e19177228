// Stroboscopic master-equation evolution and steady states.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "floqent/dissipator.hpp"
#include "floqent/floquet.hpp"
#include "floqent/model.hpp"
#include "floqent/numerics.hpp"

namespace floqent::dynamics {

enum class BasisTag { Computational, H0Eigen, FloquetT0 };
std::string to_string(BasisTag tag);

struct DensityMatrix {
    Mat4 entries{Mat4::Zero()};
    BasisTag basis{BasisTag::Computational};
};

/// Change-of-basis data; both frames are given as columns in the computational basis.
struct Frames {
    Mat4 floquet_modes;
    Mat4 h0_states;

    static Frames from(const floquet::FloquetBasis& basis, const model::StaticSpectrum& spectrum) {
        return {basis.modes_t0, spectrum.states};
    }
};

DensityMatrix to_basis(const DensityMatrix& rho, BasisTag target, const Frames& frames);

Vec16 vectorize(const Mat4& rho);
Mat4 unvectorize(const Vec16& v);

/// Full averaged generator on vec(rho) in the Floquet basis:
/// G = -i (q_a - q_b) delta - L_avg.
Mat16 generator(const dissipator::RateTensor& rates, const floquet::FloquetBasis& basis);

/// |E_0><E_0| of H_0, in the computational basis.
DensityMatrix initial_state(const model::SystemParams& p);
DensityMatrix initial_state(const model::StaticSpectrum& spectrum);

struct EvolutionRecord {
    std::vector<std::int64_t> periods;  // m, with t = m T
    std::vector<double> times;          // t in units of 1/Delta_1
    std::vector<DensityMatrix> rho;     // H_0 eigenbasis
    std::vector<double> concurrence;
    std::vector<double> min_eigenvalue; // positivity monitor per snapshot
    std::vector<std::string> positivity_log;
};

/// rho(mT) = P^m rho(0) with P = exp(G T), for every m of the sorted schedule.
/// Throws NumericalError if the trace drifts by more than 1e-8.
EvolutionRecord evolve(const dissipator::RateTensor& rates, const floquet::FloquetBasis& basis,
                       const model::StaticSpectrum& spectrum, const DensityMatrix& rho0,
                       const std::vector<std::int64_t>& schedule);

/// Unique integer period counts, `per_decade` log-spaced points per decade
/// from 10^min_decade to 10^max_decade inclusive (10^7 at most).
std::vector<std::int64_t> log_schedule(int min_decade, int max_decade, int per_decade);

struct SteadyState {
    DensityMatrix rho;    // H_0 eigenbasis
    Mat4 rho_floquet;     // Floquet basis
    double residual{0.0}; // ‖G v‖_max
    double kernel_gap{0.0}; // second-smallest singular value of G over the largest
};

/// Null vector of G with unit trace: the row of the (0,0) component is replaced
/// by the trace functional. Throws NumericalError if the kernel of G is not one
/// dimensional at relative tolerance 1e-12.
SteadyState steady_state(const dissipator::RateTensor& rates, const floquet::FloquetBasis& basis,
                         const model::StaticSpectrum& spectrum);

struct TomographyTable {
    std::vector<std::int64_t> periods;
    std::vector<std::array<double, 4>> populations;  // rho_kk
    std::vector<std::array<double, 6>> coherences;   // |rho_kl|, (k,l) = 01,02,03,12,13,23
};

TomographyTable tomography(const EvolutionRecord& record);

namespace oracle {

/// Fourier coefficient L^Q of the time-dependent Floquet-Markov generator,
/// L(t) = sum_Q L^Q exp(-iQ w t), derived from the Born-Markov equation in the
/// Floquet basis. L^0 coincides with RateTensor::L_avg.
Mat16 fourier_generator(const floquet::FloquetBasis& basis, const floquet::TransitionElements& elems,
                        const dissipator::BathFunctions& bath, int Q);

/// Stroboscopic snapshots rho(mT), m = 1..periods, in the Floquet basis, of the
/// full time-dependent equation integrated with the exponential midpoint rule.
std::vector<Mat4> evolve_full(const floquet::FloquetBasis& basis, const floquet::TransitionElements& elems,
                              const dissipator::BathFunctions& bath, const Mat4& rho0_floquet,
                              int periods, int steps_per_period = 1024);

} // namespace oracle

} // namespace floqent::dynamics
