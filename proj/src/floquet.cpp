#include "floqent/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include <unsupported/Eigen/FFT>

#include "floqent/errors.hpp"

namespace floqent::floquet {

namespace {

constexpr double kUnitarityFail = 1e-6;
constexpr double kDegeneratePhase = 1e-10;

void check_steps(int n_t) {
    if (n_t < 256 || (n_t & (n_t - 1)) != 0) {
        std::ostringstream os;
        os << "Floquet time steps must be a power of two >= 256, got " << n_t;
        throw InvalidArgument(os.str());
    }
}

void fix_phase(Eigen::Ref<Vec4> v) {
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    const cplx c = v(big);
    if (std::abs(c) > 0.0) v *= std::conj(c) / std::abs(c);
}

double zone_distance(double a, double b, double omega) {
    return std::abs(model::fold_to_zone(a - b, omega));
}

FloquetBasis assemble(const model::SystemParams& p, int n_t, int k_max,
                      const std::vector<Mat4>& props, const Mat4& modes, const RVector& quasi) {
    FloquetBasis basis;
    basis.omega = p.omega;
    basis.quasi = quasi;
    basis.modes_t0 = modes;
    basis.k_max = k_max;
    basis.n_t = n_t;

    const double dt = p.period() / n_t;
    // Sampled Floquet modes |a(t_j)> = exp(i q_a t_j) U(t_j) |a(0)>, one
    // sequence per (component, state) pair.
    std::vector<std::vector<cplx>> samples(16, std::vector<cplx>(n_t));
    for (int j = 0; j < n_t; ++j) {
        const double t = j * dt;
        const Mat4 evolved = props[j] * modes;
        for (int a = 0; a < 4; ++a) {
            const cplx ph = std::exp(kI * quasi(a) * t);
            for (int c = 0; c < 4; ++c) samples[4 * a + c][j] = ph * evolved(c, a);
        }
    }
    // u_a(K) = (1/n_t) sum_j exp(+2 pi i K j / n_t) a(t_j), the scaled inverse DFT.
    Eigen::FFT<double> fft;
    basis.fourier.assign(2 * k_max + 1, Mat4::Zero());
    std::vector<cplx> spectrum;
    for (int a = 0; a < 4; ++a) {
        for (int c = 0; c < 4; ++c) {
            fft.inv(spectrum, samples[4 * a + c]);
            for (int K = -k_max; K <= k_max; ++K) {
                basis.fourier[K + k_max](c, a) = spectrum[(K + n_t) % n_t];
            }
        }
    }
    for (int a = 0; a < 4; ++a) {
        double tail = 0.0;
        for (int K : {k_max - 1, k_max}) {
            tail += basis.fourier[K + k_max].col(a).squaredNorm();
            tail += basis.fourier[-K + k_max].col(a).squaredNorm();
        }
        basis.truncation_residual[a] = tail;
    }
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            if (zone_distance(quasi(a) * p.period(), quasi(b) * p.period(),
                              2.0 * std::numbers::pi) < kDegeneratePhase)
                basis.degenerate = true;
    return basis;
}

} // namespace

Mat4 FloquetBasis::component(int K) const {
    if (K < -k_max || K > k_max) return Mat4::Zero();
    return fourier[K + k_max];
}

bool FloquetBasis::truncation_ok(double tol) const {
    return std::all_of(truncation_residual.begin(), truncation_residual.end(),
                       [tol](double r) { return r <= tol; });
}

cplx TransitionElements::operator()(int K, int alpha, int beta) const {
    if (K < -k_range || K > k_range) return 0.0;
    return a[K + k_range](alpha, beta);
}

std::vector<Mat4> period_propagators(const model::SystemParams& p, int n_t) {
    p.validate();
    check_steps(n_t);
    const Mat4 h0 = model::build_h0(p);
    const Mat4 d = model::build_drive_op();
    const double h = p.period() / n_t;
    const double r3 = std::sqrt(3.0);
    const double c1 = 0.5 - r3 / 6.0;
    const double c2 = 0.5 + r3 / 6.0;
    const double a1 = 0.25 - r3 / 6.0;
    const double a2 = 0.25 + r3 / 6.0;

    std::vector<Mat4> props(n_t + 1);
    props[0] = Mat4::Identity();
    for (int j = 0; j < n_t; ++j) {
        const double t = j * h;
        const double f1 = model::drive_envelope(t + c1 * h, p);
        const double f2 = model::drive_envelope(t + c2 * h, p);
        const Mat4 first = numerics::unitary_step(0.5 * h0 + (a2 * f1 + a1 * f2) * d, h);
        const Mat4 second = numerics::unitary_step(0.5 * h0 + (a1 * f1 + a2 * f2) * d, h);
        props[j + 1] = second * first * props[j];
    }
    const double defect = numerics::unitarity_defect(props[n_t]);
    if (defect > kUnitarityFail) {
        std::ostringstream os;
        os << "monodromy: unitarity defect " << defect << " with " << n_t
           << " steps; increase the step count";
        throw NumericalError(os.str());
    }
    return props;
}

Mat4 monodromy(const model::SystemParams& p, int n_t) {
    return period_propagators(p, n_t).back();
}

int default_kmax(const model::SystemParams& p) {
    const auto eig = numerics::eig_hermitian(model::build_h0(p));
    const double emax = eig.values.cwiseAbs().maxCoeff();
    return static_cast<int>(std::ceil(6.0 + 2.0 * p.A / p.omega + emax / p.omega));
}

FloquetBasis floquet_basis(const model::SystemParams& p, int n_t, int k_max) {
    const std::vector<Mat4> props = period_propagators(p, n_t);
    const auto eig = numerics::eig_unitary(props.back());
    Mat4 modes = eig.vectors;
    RVector quasi(4);
    for (int a = 0; a < 4; ++a) {
        fix_phase(modes.col(a));
        quasi(a) = model::fold_to_zone(-eig.phases(a) / p.period(), p.omega);
    }
    // Order states by quasienergy for reproducible labels.
    std::array<int, 4> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return quasi(x) < quasi(y); });
    Mat4 sorted_modes;
    RVector sorted_quasi(4);
    for (int a = 0; a < 4; ++a) {
        sorted_modes.col(a) = modes.col(order[a]);
        sorted_quasi(a) = quasi(order[a]);
    }

    if (k_max >= 0) {
        if (2 * k_max + 1 > n_t) throw InvalidArgument("floquet_basis: k_max too large for n_t");
        return assemble(p, n_t, k_max, props, sorted_modes, sorted_quasi);
    }
    int k = default_kmax(p);
    for (;;) {
        FloquetBasis basis = assemble(p, n_t, k, props, sorted_modes, sorted_quasi);
        if (basis.truncation_ok() || 2 * (k + 4) + 1 > n_t / 2) return basis;
        k += 4;
    }
}

TransitionElements transition_elements(const FloquetBasis& basis, const Mat4& coupling) {
    if (numerics::hermiticity_defect(coupling) > 1e-12) {
        throw InvalidArgument("transition_elements: coupling operator must be Hermitian");
    }
    TransitionElements out;
    const int km = basis.k_max;
    out.k_range = 2 * km;
    out.a.assign(2 * out.k_range + 1, Mat4::Zero());
    std::vector<Mat4> left(2 * km + 1);
    for (int L = -km; L <= km; ++L) left[L + km] = basis.fourier[L + km].adjoint() * coupling;
    for (int K = -out.k_range; K <= out.k_range; ++K) {
        Mat4 acc = Mat4::Zero();
        const int lo = std::max(-km, -km - K);
        const int hi = std::min(km, km - K);
        for (int L = lo; L <= hi; ++L) acc.noalias() += left[L + km] * basis.fourier[L + K + km];
        out.a[K + out.k_range] = acc;
    }
    return out;
}

StateTracking track_states(const FloquetBasis& prev, const FloquetBasis& next) {
    const Mat4 ov = prev.modes_t0.adjoint() * next.modes_t0;
    std::vector<std::tuple<double, double, int, int>> pairs;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            pairs.emplace_back(-std::norm(ov(a, b)),
                               zone_distance(prev.quasi(a), next.quasi(b), prev.omega), a, b);
    std::sort(pairs.begin(), pairs.end());
    StateTracking out;
    std::array<bool, 4> used_prev{}, used_next{};
    out.min_overlap = 1.0;
    for (const auto& [neg_ov, dist, a, b] : pairs) {
        if (used_prev[a] || used_next[b]) continue;
        used_prev[a] = used_next[b] = true;
        out.perm[a] = b;
        out.min_overlap = std::min(out.min_overlap, -neg_ov);
    }
    out.tracking_lost = out.min_overlap < 0.5;
    return out;
}

} // namespace floqent::floquet
