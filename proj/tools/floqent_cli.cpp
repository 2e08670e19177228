// Command-line front end.
//
//   floqent spectrum|floquet|evolve|steady|rates [--config f] [--eps0 x] [--A y]
//   floqent sweep --config f [--out dir] [--workers n]
//   floqent figure <id> [--out dir] [--workers n]
//
// Exit status: 0 success, 1 usage error, 2 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <map>

#include <CLI11.hpp>

#include "floqent/config.hpp"
#include "floqent/dissipator.hpp"
#include "floqent/dynamics.hpp"
#include "floqent/entanglement.hpp"
#include "floqent/errors.hpp"
#include "floqent/floquet.hpp"
#include "floqent/model.hpp"
#include "floqent/sweep.hpp"
#include "floqent/twolevel.hpp"

using namespace floqent;

namespace {

struct Options {
    std::string config_path;
    std::string out;
    int workers{1};
    int k_max{-1};
    int n_t{floquet::kDefaultTimeSteps};
    std::optional<unsigned long long> seed;
    std::optional<double> eps0;  // units of omega
    std::optional<double> A;
    std::string figure;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

config::RunConfig load_config(const Options& o) {
    config::RunConfig c = o.config_path.empty() ? config::RunConfig{} : config::load(o.config_path);
    if (o.eps0) c.params.eps0 = *o.eps0 * c.params.omega;
    if (o.A) c.params.A = *o.A * c.params.omega;
    if (o.k_max != -1) c.k_max = o.k_max;
    if (o.n_t != floquet::kDefaultTimeSteps) c.n_t = o.n_t;
    c.validate();
    return c;
}

// Output goes to <out>/<name>.csv when --out is given, else to stdout.
class Sink {
public:
    Sink(const Options& o, const std::string& name) {
        if (!o.out.empty()) {
            std::filesystem::create_directories(o.out);
            path_ = (std::filesystem::path(o.out) / (name + ".csv")).string();
            file_.open(path_);
            if (!file_) throw InvalidArgument("cannot write " + path_);
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
    ~Sink() {
        if (file_.is_open()) std::cerr << "wrote " << path_ << '\n';
    }

private:
    std::string path_;
    std::ofstream file_;
};

void preamble(std::ostream& os, const config::RunConfig& c, const Options& o) {
    const auto& p = c.params;
    os << "# eps0/omega=" << num(p.eps0 / p.omega) << " A/omega=" << num(p.A / p.omega) << " delta2=" << num(p.delta2)
       << " J=" << num(p.J) << " omega=" << num(p.omega) << " T_b=" << num(p.T_b) << " gamma=" << num(p.gamma_bath)
       << " omega_c=" << num(p.omega_c) << " (energies in units of Delta1)\n";
    os << "# config_hash=" << config::hash(c) << " version=" << sweep::kVersion;
    if (o.seed) os << " seed=" << *o.seed;
    os << '\n';
}

struct Pipeline {
    model::StaticSpectrum spectrum;
    floquet::FloquetBasis basis;
    floquet::TransitionElements elems;
    dissipator::BathFunctions bath;
    dissipator::RateTensor rates;
};

Pipeline build(const config::RunConfig& c) {
    Pipeline pl;
    pl.spectrum = model::static_spectrum(c.params);
    pl.basis = floquet::floquet_basis(c.params, c.n_t, c.k_max);
    if (!pl.basis.truncation_ok()) {
        throw NumericalError("Fourier truncation residual above 1e-8 at k_max = " + std::to_string(pl.basis.k_max));
    }
    pl.elems = floquet::transition_elements(pl.basis, model::build_coupling_op());
    pl.bath = dissipator::BathFunctions::from(c.params);
    pl.rates = dissipator::rate_tensor(pl.basis, pl.elems, pl.bath);
    if (pl.rates.truncation_warning) std::cerr << "warning: rate tail fraction " << pl.rates.tail_fraction << '\n';
    return pl;
}

int cmd_spectrum(const Options& o) {
    const auto c = load_config(o);
    const auto s = model::static_spectrum(c.params);
    Sink sink(o, "spectrum");
    auto& os = sink.os();
    preamble(os, c, o);
    os << "k,energy,concurrence,character\n";
    for (int k = 0; k < 4; ++k) {
        os << k << ',' << num(s.energies(k)) << ',' << num(s.state_concurrences[k]) << ','
           << model::to_string(s.character[k]) << '\n';
    }
    for (const auto& t : model::classify_resonances(c.params, c.resonance_window_over_omega * c.params.omega)) {
        os << "# resonance " << model::to_string(t.kind) << " m=" << t.m << " detuning=" << num(t.detuning)
           << " states=" << model::to_string(t.states[0]) << '/' << model::to_string(t.states[1]) << '\n';
    }
    return 0;
}

int cmd_floquet(const Options& o) {
    const auto c = load_config(o);
    const auto s = model::static_spectrum(c.params);
    const auto b = floquet::floquet_basis(c.params, c.n_t, c.k_max);
    Sink sink(o, "floquet");
    auto& os = sink.os();
    preamble(os, c, o);
    os << "# k_max=" << b.k_max << " n_t=" << b.n_t << " degenerate=" << (b.degenerate ? 1 : 0) << '\n';
    os << "alpha,quasienergy,truncation_residual,overlap_E0,overlap_E1,overlap_E2,overlap_E3\n";
    const Mat4 ov = b.modes_t0.adjoint() * s.states;
    for (int a = 0; a < 4; ++a) {
        os << a << ',' << num(b.quasi(a)) << ',' << num(b.truncation_residual[a]);
        for (int k = 0; k < 4; ++k) os << ',' << num(std::norm(ov(a, k)));
        os << '\n';
    }
    return b.truncation_ok() ? 0 : 2;
}

int cmd_evolve(const Options& o) {
    const auto c = load_config(o);
    const auto pl = build(c);
    const auto sch = c.schedule.value_or(config::TimeSchedule{});
    const auto rec = dynamics::evolve(pl.rates, pl.basis, pl.spectrum, dynamics::initial_state(pl.spectrum),
                                      dynamics::log_schedule(sch.min_decade, sch.max_decade, sch.per_decade));
    const auto tomo = dynamics::tomography(rec);
    Sink sink(o, "evolve");
    auto& os = sink.os();
    preamble(os, c, o);
    os << "# density matrix in the H0 eigenbasis\n";
    os << "t_over_T,concurrence,min_eigenvalue,rho00,rho11,rho22,rho33,abs_rho01,abs_rho02,abs_rho03,abs_rho12,"
          "abs_rho13,abs_rho23\n";
    for (std::size_t i = 0; i < rec.periods.size(); ++i) {
        os << rec.periods[i] << ',' << num(rec.concurrence[i]) << ',' << num(rec.min_eigenvalue[i]);
        for (double v : tomo.populations[i]) os << ',' << num(v);
        for (double v : tomo.coherences[i]) os << ',' << num(v);
        os << '\n';
    }
    for (const auto& msg : rec.positivity_log) std::cerr << "positivity: " << msg << '\n';
    return 0;
}

int cmd_steady(const Options& o) {
    const auto c = load_config(o);
    const auto pl = build(c);
    const auto ss = dynamics::steady_state(pl.rates, pl.basis, pl.spectrum);
    const Mat4 comp = dynamics::to_basis(ss.rho, dynamics::BasisTag::Computational,
                                         dynamics::Frames::from(pl.basis, pl.spectrum))
                          .entries;
    const double cinf = entanglement::concurrence(comp, {1e-8, 1e-8, 1e-2}).value;
    Sink sink(o, "steady");
    auto& os = sink.os();
    preamble(os, c, o);
    os << "# residual=" << num(ss.residual) << " kernel_gap=" << num(ss.kernel_gap) << '\n';
    os << "C_inf,rho00,rho11,rho22,rho33\n" << num(cinf);
    for (int k = 0; k < 4; ++k) os << ',' << num(ss.rho.entries(k, k).real());
    os << '\n';
    return 0;
}

int cmd_rates(const Options& o) {
    const auto c = load_config(o);
    const auto pl = build(c);
    const auto tags = model::classify_resonances(c.params, c.resonance_window_over_omega * c.params.omega);
    if (tags.empty()) throw InvalidArgument("rates: no resonance within the window; widen resonance_window");
    const auto ss = dynamics::steady_state(pl.rates, pl.basis, pl.spectrum);
    std::array<double, 4> fpop{};
    for (int k = 0; k < 4; ++k) fpop[k] = ss.rho_floquet(k, k).real();
    const auto pair = twolevel::select_pair(pl.basis, pl.spectrum, tags.front());
    const auto pr = twolevel::photon_rates(pl.basis, pl.elems, pl.bath, pl.spectrum, pair, fpop);
    const auto pauli = twolevel::pauli_steady(pl.rates);
    Sink sink(o, "rates");
    auto& os = sink.os();
    preamble(os, c, o);
    const auto& t = tags.front();
    os << "# resonance " << model::to_string(t.kind) << " m=" << t.m << " states=" << model::to_string(t.states[0])
       << '/' << model::to_string(t.states[1]) << " pair: floquet " << pair.a << " (E" << pair.h0_a << ") / floquet "
       << pair.b << " (E" << pair.h0_b << ")\n";
    os << "# total=" << num(pr.total) << " pop_a=" << num(pr.pop_a) << " pop_b=" << num(pr.pop_b)
       << " two_level_valid=" << (pr.two_level_valid ? 1 : 0) << " dominant_n=" << pr.dominant() << '\n';
    os << "# pauli_populations=" << num(pauli[0]) << ',' << num(pauli[1]) << ',' << num(pauli[2]) << ','
       << num(pauli[3]) << '\n';
    os << "n,gamma_r\n";
    for (const auto& [n, g] : pr.rates)
        if (std::abs(n) <= c.rate_n_max) os << n << ',' << num(g) << '\n';
    return 0;
}

int cmd_sweep(const Options& o) {
    if (o.config_path.empty()) throw InvalidArgument("sweep: --config is required");
    const auto c = load_config(o);
    if (!c.axis1) throw InvalidArgument("sweep: config must define axis1");
    const auto r = sweep::run_sweep(c, o.workers);
    const std::string dir = o.out.empty() ? "sweep_out" : o.out;
    sweep::write_result(r, dir);
    int failed = 0;
    for (const auto& p : r.points) {
        if (!p.ok) {
            ++failed;
            std::cerr << "point " << p.index << ": " << p.error << '\n';
        }
    }
    std::cerr << "wrote " << dir << "/sweep.json (" << r.points.size() << " points, " << failed << " failed)\n";
    return failed == static_cast<int>(r.points.size()) ? 2 : 0;
}

int cmd_figure(const Options& o) {
    const std::string dir = o.out.empty() ? "figures" : o.out;
    for (const auto& path : sweep::reproduce_figure(o.figure, dir, o.workers, o.k_max, o.n_t))
        std::cerr << "wrote " << path << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Floquet-Born-Markov simulator for two driven, coupled qubits"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--workers", o.workers, "worker threads for grid sweeps")->check(CLI::Range(1, 4096));
        sub->add_option("--kmax", o.k_max, "Fourier cutoff (default: automatic)");
        sub->add_option("--nt", o.n_t, "time steps per drive period (power of two, >= 256)");
        sub->add_option("--seed", o.seed, "RNG seed, recorded in the output header");
    };
    auto point = [&](CLI::App* sub) {
        common(sub);
        sub->add_option("--eps0", o.eps0, "bias eps0 in units of omega (overrides the config)");
        sub->add_option("--A", o.A, "drive amplitude A in units of omega (overrides the config)");
    };

    std::map<CLI::App*, int (*)(const Options&)> handlers;
    auto add = [&](const char* name, const char* help, int (*fn)(const Options&), bool single) {
        CLI::App* sub = app.add_subcommand(name, help);
        single ? point(sub) : common(sub);
        handlers[sub] = fn;
        return sub;
    };
    add("spectrum", "eigenenergies, concurrences and resonance tags of H0", cmd_spectrum, true);
    add("floquet", "quasienergies and Floquet modes", cmd_floquet, true);
    add("evolve", "stroboscopic evolution from the H0 ground state", cmd_evolve, true);
    add("steady", "steady state and its concurrence", cmd_steady, true);
    add("rates", "photon-resolved relaxation rates for the leading resonance", cmd_rates, true);
    add("sweep", "steady-state grid sweep over eps0 and/or A", cmd_sweep, false);
    CLI::App* fig = add("figure", "reproduce a figure preset", cmd_figure, false);
    std::string ids;
    for (const auto& id : sweep::figure_ids()) ids += (ids.empty() ? "" : ", ") + id;
    fig->add_option("id", o.figure, "one of: " + ids)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        for (const auto& [sub, fn] : handlers)
            if (sub->parsed()) return fn(o);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
