#include "floqent/twolevel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "floqent/errors.hpp"

namespace floqent::twolevel {

namespace {

constexpr double kEdgeRelTol = 1e-14;

int h0_index(const model::StaticSpectrum& spectrum, model::BareState s) {
    for (int k = 0; k < 4; ++k)
        if (spectrum.character[k] == s) return k;
    throw NumericalError("select_pair: bare state " + model::to_string(s) + " not identified");
}

int unfold(double quasi, double energy, double omega) {
    return static_cast<int>(std::lround((energy - quasi) / omega));
}

} // namespace

double PhotonRates::rate(int n) const {
    const auto it = rates.find(n);
    return it == rates.end() ? 0.0 : it->second;
}

int PhotonRates::dominant() const {
    int best = 0;
    double best_rate = -1.0;
    for (const auto& [n, r] : rates) {
        if (r > best_rate) {
            best_rate = r;
            best = n;
        }
    }
    return best;
}

StatePair select_pair(const floquet::FloquetBasis& basis, const model::StaticSpectrum& spectrum,
                      const model::ResonanceTag& tag) {
    if (tag.kind == model::ResonanceKind::None) {
        throw InvalidArgument("select_pair: resonance tag has kind 'none'");
    }
    int k1 = h0_index(spectrum, tag.states[0]);
    int k2 = h0_index(spectrum, tag.states[1]);
    if (spectrum.energies(k1) < spectrum.energies(k2)) std::swap(k1, k2);

    const Mat4 ov = basis.modes_t0.adjoint() * spectrum.states;
    auto best = [&](int k, double& overlap) {
        Eigen::Index idx = 0;
        overlap = ov.col(k).cwiseAbs2().maxCoeff(&idx);
        return static_cast<int>(idx);
    };
    StatePair pair;
    pair.h0_a = k1;
    pair.h0_b = k2;
    pair.a = best(k1, pair.overlap_a);
    pair.b = best(k2, pair.overlap_b);
    if (pair.overlap_a < 0.5 || pair.overlap_b < 0.5 || pair.a == pair.b) {
        std::ostringstream os;
        os << "select_pair: ambiguous Floquet identification (overlaps " << pair.overlap_a << ", "
           << pair.overlap_b << ")";
        throw NumericalError(os.str());
    }
    return pair;
}

PhotonRates photon_rates(const floquet::FloquetBasis& basis, const floquet::TransitionElements& elems,
                         const dissipator::BathFunctions& bath, const model::StaticSpectrum& spectrum,
                         const StatePair& pair,
                         const std::optional<std::array<double, 4>>& steady_floquet_populations) {
    PhotonRates out;
    out.pair = pair;
    const double w = basis.omega;
    const int a = pair.a;
    const int b = pair.b;
    out.unfold_a = unfold(basis.quasi(a), spectrum.energies(pair.h0_a), w);
    out.unfold_b = unfold(basis.quasi(b), spectrum.energies(pair.h0_b), w);
    const int dm = out.unfold_a - out.unfold_b;
    const double q_ab = basis.quasi(a) - basis.quasi(b);
    const int kr = elems.k_range;
    const int nmax = kr + std::abs(dm);

    double up = 0.0;   // b -> a
    double down = 0.0; // a -> b
    double tail = 0.0;
    for (int n = -nmax; n <= nmax; ++n) {
        const double to_a = dissipator::g_coeff(q_ab + (n + dm) * w, bath) * std::norm(elems(-n - dm, a, b));
        const double to_b = dissipator::g_coeff(-q_ab + (n - dm) * w, bath) * std::norm(elems(-n + dm, b, a));
        const double term = 2.0 * (to_a + to_b);
        out.rates[n] = term;
        out.total += term;
        up += to_a;
        down += to_b;
        if (std::abs(n) >= kr - 1) tail += term;
    }
    out.tail_fraction = out.total > 0.0 ? tail / out.total : 0.0;
    if (up + down > 0.0) {
        out.pop_a = up / (up + down);
        out.pop_b = down / (up + down);
    }
    if (steady_floquet_populations) {
        bool ok = true;
        for (int k = 0; k < 4; ++k)
            if (k != a && k != b && (*steady_floquet_populations)[k] >= 0.05) ok = false;
        out.two_level_valid = ok;
    }
    return out;
}

std::array<double, 4> pauli_steady(const dissipator::RateTensor& rates) {
    Eigen::Matrix4d w = Eigen::Matrix4d::Zero(); // w(a, b): rate b -> a
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (a != b) w(a, b) = std::max(0.0, 2.0 * rates.at(a, a, b, b).real());

    // Closed communicating classes of the transition graph.
    const double wmax = w.maxCoeff();
    std::array<std::array<bool, 4>, 4> reach{};
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) reach[x][y] = (x == y) || (wmax > 0.0 && w(y, x) > kEdgeRelTol * wmax);
    for (int k = 0; k < 4; ++k)
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y) reach[x][y] = reach[x][y] || (reach[x][k] && reach[k][y]);
    int closed = 0;
    for (int x = 0; x < 4; ++x) {
        bool is_root = true; // x is the smallest index of its class
        bool is_closed = true;
        for (int y = 0; y < 4; ++y) {
            const bool same = reach[x][y] && reach[y][x];
            if (same && y < x) is_root = false;
            if (reach[x][y] && !reach[y][x]) is_closed = false;
        }
        if (is_root && is_closed) ++closed;
    }
    if (closed != 1) {
        std::ostringstream os;
        os << "pauli_steady: rate graph has " << closed << " closed classes; steady state is not unique";
        throw NumericalError(os.str());
    }

    CMatrix m = CMatrix::Zero(4, 4);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            if (a != b) {
                m(a, b) += w(a, b);
                m(b, b) -= w(a, b);
            }
        }
    }
    m.row(0).setOnes();
    CVector rhs = CVector::Zero(4);
    rhs(0) = 1.0;
    const CVector p = numerics::solve(m, rhs);
    std::array<double, 4> out{};
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) {
        out[k] = std::max(0.0, p(k).real());
        sum += out[k];
    }
    for (double& x : out) x /= sum;
    return out;
}

} // namespace floqent::twolevel
