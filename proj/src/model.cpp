#include "floqent/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "floqent/entanglement.hpp"
#include "floqent/errors.hpp"

namespace floqent::model {

namespace {

Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

// sigma_+ = (sigma_x + i sigma_y) / 2
Eigen::Matrix2cd sigma_plus() {
    Eigen::Matrix2cd m;
    m << 0.0, 1.0, 0.0, 0.0;
    return m;
}

void fix_phase(Eigen::Ref<Vec4> v) {
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    const cplx c = v(big);
    if (std::abs(c) > 0.0) {
        v *= std::conj(c) / std::abs(c);
    }
}

} // namespace

double SystemParams::period() const {
    return 2.0 * std::numbers::pi / omega;
}

void SystemParams::validate() const {
    std::ostringstream bad;
    const double all[] = {eps0, delta1, delta2, J, A, omega, gamma_bath, omega_c, T_b};
    for (double v : all) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("SystemParams: non-finite parameter");
        }
    }
    if (!(delta1 > 0.0)) bad << " delta1 must be > 0;";
    if (!(omega > 0.0)) bad << " omega must be > 0;";
    if (!(omega_c > 0.0)) bad << " omega_c must be > 0;";
    if (!(T_b > 0.0)) bad << " T_b must be > 0;";
    if (!(gamma_bath >= 0.0)) bad << " gamma_bath must be >= 0;";
    if (!(A >= 0.0)) bad << " A must be >= 0;";
    if (!bad.str().empty()) {
        throw InvalidArgument("SystemParams:" + bad.str());
    }
}

SystemParams default_params(double eps0_over_omega, double A_over_omega) {
    SystemParams p;
    p.eps0 = eps0_over_omega * p.omega;
    p.A = A_over_omega * p.omega;
    return p;
}

Mat4 on_qubit(int qubit, const Eigen::Matrix2cd& op) {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd& left = qubit == 1 ? op : id;
    const Eigen::Matrix2cd& right = qubit == 1 ? id : op;
    Mat4 out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d)
                    out(2 * a + c, 2 * b + d) = left(a, b) * right(c, d);
    return out;
}

Mat4 build_h0(const SystemParams& p) {
    const Mat4 sz1 = on_qubit(1, pauli_z());
    const Mat4 sz2 = on_qubit(2, pauli_z());
    const Mat4 sx1 = on_qubit(1, pauli_x());
    const Mat4 sx2 = on_qubit(2, pauli_x());
    const Mat4 sp1 = on_qubit(1, sigma_plus());
    const Mat4 sp2 = on_qubit(2, sigma_plus());
    const Mat4 sm1 = sp1.adjoint();
    const Mat4 sm2 = sp2.adjoint();
    return -0.5 * p.eps0 * (sz1 + sz2) - 0.5 * p.delta1 * sx1 - 0.5 * p.delta2 * sx2
           - 0.5 * p.J * (sp1 * sm2 + sm1 * sp2);
}

Mat4 build_drive_op() {
    Mat4 d = Mat4::Zero();
    d(0, 0) = 1.0;
    d(3, 3) = -1.0;
    return d;
}

double drive_envelope(double t, const SystemParams& p) {
    return -p.A * std::cos(p.omega * t);
}

Mat4 drive(double t, const SystemParams& p) {
    return drive_envelope(t, p) * build_drive_op();
}

Mat4 build_coupling_op() {
    return 0.5 * (on_qubit(1, pauli_z()) + on_qubit(2, pauli_z()));
}

std::string to_string(BareState s) {
    switch (s) {
    case BareState::S0: return "s0";
    case BareState::EMinus: return "e-";
    case BareState::EPlus: return "e+";
    case BareState::S1: return "s1";
    }
    return "?";
}

Vec4 bare_vector(BareState s) {
    const double r = std::numbers::sqrt2 / 2.0;
    Vec4 v = Vec4::Zero();
    switch (s) {
    case BareState::S0: v(0) = 1.0; break;
    case BareState::EMinus: v(1) = r; v(2) = -r; break;
    case BareState::EPlus: v(1) = r; v(2) = r; break;
    case BareState::S1: v(3) = 1.0; break;
    }
    return v;
}

StaticSpectrum static_spectrum(const SystemParams& p) {
    p.validate();
    const auto eig = numerics::eig_hermitian(build_h0(p));
    StaticSpectrum s;
    s.energies = eig.values;
    s.states = eig.vectors;
    for (int k = 0; k < 4; ++k) {
        fix_phase(s.states.col(k));
        s.state_concurrences[k] = entanglement::concurrence_pure(s.states.col(k));
    }

    // Assign bare-state characters by the permutation of maximal total overlap.
    Eigen::Matrix4d overlap;
    for (int k = 0; k < 4; ++k)
        for (int b = 0; b < 4; ++b)
            overlap(k, b) = std::norm(bare_vector(static_cast<BareState>(b)).dot(s.states.col(k)));
    std::array<int, 4> perm{0, 1, 2, 3};
    std::array<int, 4> best = perm;
    double best_score = -1.0;
    do {
        double score = 0.0;
        for (int k = 0; k < 4; ++k) score += overlap(k, perm[k]);
        if (score > best_score + 1e-12) {
            best_score = score;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (int k = 0; k < 4; ++k) s.character[k] = static_cast<BareState>(best[k]);
    return s;
}

std::string to_string(ResonanceKind k) {
    switch (k) {
    case ResonanceKind::SS: return "SS";
    case ResonanceKind::SE: return "SE";
    case ResonanceKind::EE: return "EE";
    case ResonanceKind::None: return "none";
    }
    return "?";
}

std::vector<ResonanceTag> classify_resonances(const SystemParams& p, double window) {
    if (!(p.omega > 0.0)) {
        throw InvalidArgument("classify_resonances: omega must be > 0");
    }
    std::vector<ResonanceTag> tags;
    auto scan = [&](ResonanceKind kind, double condition, std::array<BareState, 2> states) {
        const int lo = static_cast<int>(std::ceil((condition - window) / p.omega));
        const int hi = static_cast<int>(std::floor((condition + window) / p.omega));
        for (int m = lo; m <= hi; ++m) {
            const double det = condition - m * p.omega;
            if (std::abs(det) < window) {
                tags.push_back({kind, m, det, states});
            }
        }
    };
    scan(ResonanceKind::SS, 2.0 * p.eps0, {BareState::S0, BareState::S1});
    scan(ResonanceKind::SE, p.eps0 + 0.5 * p.J, {BareState::S0, BareState::EMinus});
    scan(ResonanceKind::SE, p.eps0 - 0.5 * p.J, {BareState::S0, BareState::EPlus});
    scan(ResonanceKind::EE, p.J, {BareState::EPlus, BareState::EMinus});
    std::stable_sort(tags.begin(), tags.end(), [](const ResonanceTag& a, const ResonanceTag& b) {
        return std::abs(a.detuning) < std::abs(b.detuning);
    });
    return tags;
}

double fold_to_zone(double energy, double omega) {
    double y = energy - omega * std::round(energy / omega);
    if (y <= -0.5 * omega) y += omega;
    if (y > 0.5 * omega) y -= omega;
    return y;
}

std::array<double, 4> perturbative_quasienergies(const SystemParams& p) {
    return {fold_to_zone(-p.eps0, p.omega), fold_to_zone(0.5 * p.J, p.omega),
            fold_to_zone(-0.5 * p.J, p.omega), fold_to_zone(p.eps0, p.omega)};
}

} // namespace floqent::model
