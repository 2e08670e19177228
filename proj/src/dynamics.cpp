#include "floqent/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "floqent/entanglement.hpp"
#include "floqent/errors.hpp"

namespace floqent::dynamics {

using dissipator::vec_index;

namespace {

constexpr double kTraceDrift = 1e-8;
constexpr double kKernelRelTol = 1e-12;
constexpr double kPositivityTol = 1e-8;
constexpr std::int64_t kMaxPeriods = 10'000'000;

// Snapshots may be slightly non-positive (the generator is not guaranteed to
// be completely positive); that is logged, and concurrence is taken on the
// clamped matrix.
const entanglement::DensityTolerance kSnapshotTolerance{1e-8, 1e-8, 1e-2};

Mat4 frame_of(BasisTag tag, const Frames& frames) {
    switch (tag) {
    case BasisTag::Computational: return Mat4::Identity();
    case BasisTag::H0Eigen: return frames.h0_states;
    case BasisTag::FloquetT0: return frames.floquet_modes;
    }
    return Mat4::Identity();
}

// The generator conserves the trace exactly, so t^T P = t^T for the trace
// functional t. Rounding breaks this by ~1e-16 per product and the repeated
// squarings would accumulate it linearly in m; a rank-one update along t
// restores the identity at every level.
Mat16 conserve_trace(Mat16 p) {
    Eigen::Matrix<cplx, 1, 16> defect = Eigen::Matrix<cplx, 1, 16>::Zero();
    for (int k = 0; k < 4; ++k) defect += p.row(vec_index(k, k));
    for (int k = 0; k < 4; ++k) defect(vec_index(k, k)) -= 1.0;
    for (int k = 0; k < 4; ++k) p.row(vec_index(k, k)) -= 0.25 * defect;
    return p;
}

} // namespace

std::string to_string(BasisTag tag) {
    switch (tag) {
    case BasisTag::Computational: return "computational";
    case BasisTag::H0Eigen: return "h0_eigen";
    case BasisTag::FloquetT0: return "floquet_t0";
    }
    return "?";
}

DensityMatrix to_basis(const DensityMatrix& rho, BasisTag target, const Frames& frames) {
    if (rho.basis == target) return rho;
    const Mat4 from = frame_of(rho.basis, frames);
    const Mat4 to = frame_of(target, frames);
    const Mat4 comp = from * rho.entries * from.adjoint();
    return {to.adjoint() * comp * to, target};
}

Vec16 vectorize(const Mat4& rho) {
    Vec16 v;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) v(vec_index(a, b)) = rho(a, b);
    return v;
}

Mat4 unvectorize(const Vec16& v) {
    Mat4 rho;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) rho(a, b) = v(vec_index(a, b));
    return rho;
}

Mat16 generator(const dissipator::RateTensor& rates, const floquet::FloquetBasis& basis) {
    Mat16 g = -rates.L_avg;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            g(vec_index(a, b), vec_index(a, b)) -= kI * (basis.quasi(a) - basis.quasi(b));
    return g;
}

DensityMatrix initial_state(const model::StaticSpectrum& spectrum) {
    const Vec4 ground = spectrum.states.col(0);
    return {ground * ground.adjoint(), BasisTag::Computational};
}

DensityMatrix initial_state(const model::SystemParams& p) {
    return initial_state(model::static_spectrum(p));
}

EvolutionRecord evolve(const dissipator::RateTensor& rates, const floquet::FloquetBasis& basis,
                       const model::StaticSpectrum& spectrum, const DensityMatrix& rho0,
                       const std::vector<std::int64_t>& schedule) {
    if (!std::is_sorted(schedule.begin(), schedule.end())) {
        throw InvalidArgument("evolve: schedule must be sorted");
    }
    if (!schedule.empty() && (schedule.front() < 0 || schedule.back() > kMaxPeriods)) {
        throw InvalidArgument("evolve: schedule entries must lie in [0, 1e7]");
    }
    const Frames frames = Frames::from(basis, spectrum);
    const double period = 2.0 * std::numbers::pi / basis.omega;
    const Mat16 one_period = numerics::expm(generator(rates, basis) * period);

    std::vector<Mat16> powers{conserve_trace(one_period)}; // powers[j] = P^(2^j)
    Vec16 v = vectorize(to_basis(rho0, BasisTag::FloquetT0, frames).entries);
    std::int64_t current = 0;

    EvolutionRecord rec;
    for (std::int64_t m : schedule) {
        std::int64_t step = m - current;
        for (std::size_t j = 0; step > 0; ++j, step >>= 1) {
            if (j == powers.size()) powers.push_back(conserve_trace(powers.back() * powers.back()));
            if (step & 1) v = powers[j] * v;
        }
        current = m;

        const Mat4 rho_f = unvectorize(v);
        const double drift = std::abs(rho_f.trace() - cplx(1.0));
        if (drift > kTraceDrift) {
            std::ostringstream os;
            os << "evolve: trace drift " << drift << " at m = " << m;
            throw NumericalError(os.str());
        }
        const DensityMatrix floquet_rho{rho_f, BasisTag::FloquetT0};
        const Mat4 comp = to_basis(floquet_rho, BasisTag::Computational, frames).entries;
        const double min_eig = numerics::eig_hermitian(0.5 * (comp + comp.adjoint())).values(0);
        if (min_eig < -kPositivityTol) {
            std::ostringstream os;
            os << "m=" << m << " min eigenvalue " << min_eig;
            rec.positivity_log.push_back(os.str());
        }
        rec.periods.push_back(m);
        rec.times.push_back(m * period);
        rec.rho.push_back(to_basis(floquet_rho, BasisTag::H0Eigen, frames));
        rec.concurrence.push_back(entanglement::concurrence(comp, kSnapshotTolerance).value);
        rec.min_eigenvalue.push_back(min_eig);
    }
    return rec;
}

std::vector<std::int64_t> log_schedule(int min_decade, int max_decade, int per_decade) {
    if (min_decade < 0 || max_decade > 7 || min_decade > max_decade || per_decade < 1) {
        throw InvalidArgument("log_schedule: need 0 <= min_decade <= max_decade <= 7, per_decade >= 1");
    }
    std::set<std::int64_t> ms;
    const int n = (max_decade - min_decade) * per_decade;
    for (int k = 0; k <= n; ++k) {
        const double e = min_decade + static_cast<double>(k) / per_decade;
        ms.insert(static_cast<std::int64_t>(std::llround(std::pow(10.0, e))));
    }
    return {ms.begin(), ms.end()};
}

SteadyState steady_state(const dissipator::RateTensor& rates, const floquet::FloquetBasis& basis,
                         const model::StaticSpectrum& spectrum) {
    const Mat16 g = generator(rates, basis);
    Eigen::JacobiSVD<Mat16> svd(g);
    const auto& sv = svd.singularValues(); // descending
    const double smax = sv(0);
    int kernel = 0;
    for (int k = 0; k < 16; ++k)
        if (sv(k) <= kKernelRelTol * smax) ++kernel;
    if (kernel != 1 || !(smax > 0.0)) {
        std::ostringstream os;
        os << "steady_state: generator kernel has dimension " << kernel
           << " (expected 1); steady state is not unique";
        throw NumericalError(os.str());
    }

    Mat16 a = g;
    Vec16 rhs = Vec16::Zero();
    a.row(0).setZero();
    for (int k = 0; k < 4; ++k) a(0, vec_index(k, k)) = 1.0;
    rhs(0) = 1.0;
    const Vec16 v = numerics::solve(a, rhs);

    SteadyState out;
    out.residual = (g * v).cwiseAbs().maxCoeff();
    out.kernel_gap = sv(14) / smax;
    if (out.residual > 1e-10) {
        std::ostringstream os;
        os << "steady_state: residual " << out.residual << " exceeds 1e-10";
        throw NumericalError(os.str());
    }
    Mat4 rho_f = unvectorize(v);
    rho_f = 0.5 * (rho_f + rho_f.adjoint());
    out.rho_floquet = rho_f;
    out.rho = to_basis({rho_f, BasisTag::FloquetT0}, BasisTag::H0Eigen, Frames::from(basis, spectrum));
    return out;
}

TomographyTable tomography(const EvolutionRecord& record) {
    if (record.rho.empty()) throw InvalidArgument("tomography: empty evolution record");
    TomographyTable t;
    t.periods = record.periods;
    for (const auto& r : record.rho) {
        std::array<double, 4> pop{};
        std::array<double, 6> coh{};
        int idx = 0;
        for (int k = 0; k < 4; ++k) {
            pop[k] = r.entries(k, k).real();
            for (int l = k + 1; l < 4; ++l) coh[idx++] = std::abs(r.entries(k, l));
        }
        t.populations.push_back(pop);
        t.coherences.push_back(coh);
    }
    return t;
}

namespace oracle {

Mat16 fourier_generator(const floquet::FloquetBasis& basis, const floquet::TransitionElements& elems,
                        const dissipator::BathFunctions& bath, int Q) {
    const int kr = elems.k_range;
    const double w = basis.omega;
    const auto& q = basis.quasi;
    auto A = [&](int K, int x, int y) { return elems(K, x, y); };
    auto g = [&](double x) { return dissipator::g_coeff(x, bath); };
    const int klo = std::max(-kr, Q - kr);
    const int khi = std::min(kr, Q + kr);

    Mat16 out = Mat16::Zero();
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int a2 = 0; a2 < 4; ++a2) {
                for (int b2 = 0; b2 < 4; ++b2) {
                    cplx v = 0.0;
                    for (int K = klo; K <= khi; ++K) {
                        if (b == b2) {
                            for (int n = 0; n < 4; ++n)
                                v += A(Q - K, a, n) * A(K, n, a2) * g(q(n) - q(a2) - K * w);
                        }
                        if (a == a2) {
                            for (int n = 0; n < 4; ++n)
                                v += A(K, b2, n) * A(Q - K, n, b) * g(q(n) - q(b2) + K * w);
                        }
                        v -= A(K, a, a2) * A(Q - K, b2, b) * g(q(a) - q(a2) - K * w);
                        v -= A(Q - K, a, a2) * A(K, b2, b) * g(q(b) - q(b2) + K * w);
                    }
                    out(vec_index(a, b), vec_index(a2, b2)) = v;
                }
            }
        }
    }
    return out;
}

std::vector<Mat4> evolve_full(const floquet::FloquetBasis& basis, const floquet::TransitionElements& elems,
                              const dissipator::BathFunctions& bath, const Mat4& rho0_floquet,
                              int periods, int steps_per_period) {
    const int qmax = 2 * elems.k_range;
    std::vector<Mat16> coeffs;
    std::vector<int> qs;
    for (int Q = -qmax; Q <= qmax; ++Q) {
        Mat16 c = fourier_generator(basis, elems, bath, Q);
        if (c.cwiseAbs().maxCoeff() > 0.0) {
            coeffs.push_back(std::move(c));
            qs.push_back(Q);
        }
    }
    Mat16 coherent = Mat16::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            coherent(vec_index(a, b), vec_index(a, b)) = -kI * (basis.quasi(a) - basis.quasi(b));

    const double period = 2.0 * std::numbers::pi / basis.omega;
    const double h = period / steps_per_period;
    Mat16 one_period = Mat16::Identity();
    for (int n = 0; n < steps_per_period; ++n) {
        const double t_mid = (n + 0.5) * h;
        Mat16 gen = coherent;
        for (std::size_t i = 0; i < qs.size(); ++i)
            gen -= coeffs[i] * std::exp(-kI * static_cast<double>(qs[i]) * basis.omega * t_mid);
        one_period = numerics::expm(gen * h) * one_period;
    }

    std::vector<Mat4> out;
    Vec16 v = vectorize(rho0_floquet);
    for (int m = 1; m <= periods; ++m) {
        v = one_period * v;
        out.push_back(unvectorize(v));
    }
    return out;
}

} // namespace oracle

} // namespace floqent::dynamics
