#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "floqent/dissipator.hpp"
#include "floqent/dynamics.hpp"
#include "floqent/errors.hpp"
#include "floqent/floquet.hpp"
#include "floqent/model.hpp"
#include "floqent/svg_plot.hpp"
#include "floqent/sweep.hpp"

namespace floqent::sweep {

namespace {

namespace fs = std::filesystem;

// Line colours of the four H_0 eigenstates, reused across panels.
const char* kStateColor[4] = {"#000000", "#d62728", "#2ca02c", "#1f77b4"};

constexpr double kDriveAmplitude = 3.8; // A / omega of the time-resolved figures

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string csv() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
        os << '\n';
        char buf[40];
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", row[i]);
                os << (i ? "," : "") << buf;
            }
            os << '\n';
        }
        return os.str();
    }
};

class Writer {
public:
    Writer(std::string dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    void table(const std::string& name, const Table& t) { write(name + ".csv", t.csv()); }
    void svg(const std::string& name, const std::string& text) { write(name + ".svg", text); }
    void sweep(const std::string& name, const SweepResult& r) {
        write_result(r, (fs::path(dir_) / name).string());
        written_.push_back((fs::path(dir_) / name / "sweep.json").string());
    }
    std::vector<std::string> written() const { return written_; }

private:
    void write(const std::string& file, const std::string& text) {
        const std::string path = (fs::path(dir_) / file).string();
        plot::write_file(path, text);
        written_.push_back(path);
    }

    std::string dir_;
    std::vector<std::string> written_;
};

config::RunConfig base_config(int k_max, int n_t) {
    config::RunConfig c;
    c.k_max = k_max;
    c.n_t = n_t;
    return c;
}

config::Axis axis(config::AxisName name, double lo, double hi, int count) {
    return config::Axis{name, lo, hi, count};
}

std::string eps_label(double e) {
    std::ostringstream os;
    os << "eps0/omega = " << e;
    return os.str();
}

// Steady-state sweep over A/omega at fixed eps0/omega.
SweepResult amplitude_sweep(double eps0, double a_lo, double a_hi, int count, bool rates, int workers, int k_max,
                            int n_t) {
    auto cfg = base_config(k_max, n_t);
    cfg.params = model::default_params(eps0, 0.0);
    cfg.axis1 = axis(config::AxisName::A, a_lo, a_hi, count);
    cfg.outputs = {true, true, rates, false};
    return run_sweep(cfg, workers);
}

struct Trajectory {
    dynamics::EvolutionRecord record;
    dynamics::TomographyTable tomo;
};

Trajectory trajectory(double eps0, double a, const std::vector<std::int64_t>& schedule, int k_max, int n_t) {
    const auto p = model::default_params(eps0, a);
    const auto spectrum = model::static_spectrum(p);
    const auto basis = floquet::floquet_basis(p, n_t, k_max);
    const auto elems = floquet::transition_elements(basis, model::build_coupling_op());
    const auto rates = dissipator::rate_tensor(basis, elems, dissipator::BathFunctions::from(p));
    Trajectory t;
    t.record = dynamics::evolve(rates, basis, spectrum, dynamics::initial_state(spectrum), schedule);
    t.tomo = dynamics::tomography(t.record);
    return t;
}

std::vector<double> as_double(const std::vector<std::int64_t>& v) { return {v.begin(), v.end()}; }

void tomography_figure(Writer& w, const std::string& name, double eps0, int k_max, int n_t) {
    const auto t = trajectory(eps0, kDriveAmplitude, dynamics::log_schedule(0, 7, 20), k_max, n_t);
    static const char* pairs[6] = {"01", "02", "03", "12", "13", "23"};
    Table tab;
    tab.header = {"t_over_T", "concurrence", "rho00", "rho11", "rho22", "rho33"};
    for (auto p : pairs) tab.header.push_back(std::string("abs_rho") + p);
    for (std::size_t i = 0; i < t.tomo.periods.size(); ++i) {
        std::vector<double> row{static_cast<double>(t.tomo.periods[i]), t.record.concurrence[i]};
        row.insert(row.end(), t.tomo.populations[i].begin(), t.tomo.populations[i].end());
        row.insert(row.end(), t.tomo.coherences[i].begin(), t.tomo.coherences[i].end());
        tab.rows.push_back(std::move(row));
    }
    w.table(name, tab);

    plot::LinePlot lp;
    lp.title = "Tomography, " + eps_label(eps0) + ", A/omega = 3.8";
    lp.xlabel = "t/T";
    lp.ylabel = "rho_kl";
    lp.log_x = true;
    lp.y_range = {{-0.02, 1.02}};
    const auto x = as_double(t.tomo.periods);
    for (int k = 0; k < 4; ++k) {
        plot::Series s{"rho_" + std::to_string(k) + std::to_string(k), x, {}, kStateColor[k], false};
        for (const auto& pop : t.tomo.populations) s.y.push_back(pop[k]);
        lp.series.push_back(std::move(s));
    }
    for (int c = 0; c < 6; ++c) {
        plot::Series s{std::string("|rho_") + pairs[c] + "|", x, {}, "", true};
        for (const auto& coh : t.tomo.coherences) s.y.push_back(coh[c]);
        lp.series.push_back(std::move(s));
    }
    w.svg(name, plot::render(lp));

    plot::LinePlot cp;
    cp.title = "Concurrence, " + eps_label(eps0) + ", A/omega = 3.8";
    cp.xlabel = "t/T";
    cp.ylabel = "C";
    cp.log_x = true;
    cp.y_range = {{0.0, 1.0}};
    cp.series.push_back({"C", x, t.record.concurrence, "#000000", false});
    w.svg(name + "_concurrence", plot::render(cp));
}

void energy_fan(Writer& w, const std::string& name, double lo, double hi, int count, bool resonance_lines) {
    Table tab;
    tab.header = {"eps0_over_omega", "E0", "E1", "E2", "E3", "C_ground"};
    plot::LinePlot lp;
    lp.title = "Eigenenergies of H0";
    lp.xlabel = "eps0/omega";
    lp.ylabel = "E_i / Delta_1";
    std::vector<double> x;
    std::array<std::vector<double>, 4> e;
    for (int i = 0; i < count; ++i) {
        const double eps = lo + (hi - lo) * i / (count - 1);
        const auto spec = model::static_spectrum(model::default_params(eps, 0.0));
        x.push_back(eps);
        std::vector<double> row{eps};
        for (int k = 0; k < 4; ++k) {
            e[k].push_back(spec.energies(k));
            row.push_back(spec.energies(k));
        }
        row.push_back(spec.state_concurrences[0]);
        tab.rows.push_back(std::move(row));
    }
    for (int k = 0; k < 4; ++k) lp.series.push_back({"E" + std::to_string(k), x, e[k], kStateColor[k], false});
    if (resonance_lines) {
        // Ground level shifted by n photons; crossings mark the resonances.
        const double w0 = model::SystemParams{}.omega;
        for (int n = 2; n <= 9; n += 1) {
            plot::Series s{n == 2 ? "E0 + n omega" : "", x, {}, "#999999", true};
            for (double v : e[0]) s.y.push_back(v + n * w0);
            lp.series.push_back(std::move(s));
        }
    }
    w.table(name, tab);
    w.svg(name, plot::render(lp));
}

// C(t) heatmap with t/T on a log x axis and the swept parameter on y.
void concurrence_map(Writer& w, const std::string& name, const SweepResult& r, const std::string& ylabel,
                     const std::string& title) {
    plot::Heatmap hm;
    hm.title = title;
    hm.xlabel = "t/T";
    hm.ylabel = ylabel;
    hm.zlabel = "C";
    hm.log_x = true;
    const PointResult* first = nullptr;
    for (const auto& p : r.points)
        if (p.ok) {
            first = &p;
            break;
        }
    if (!first) throw NumericalError(name + ": every grid point failed");
    hm.x = as_double(first->periods);
    Table tab;
    tab.header = {"t_over_T"};
    for (const auto& p : r.points) {
        hm.y.push_back(p.x1);
        tab.header.push_back("C(" + std::to_string(p.x1) + ")");
    }
    for (std::size_t j = 0; j < hm.x.size(); ++j) {
        std::vector<double> row{hm.x[j]};
        for (const auto& p : r.points) row.push_back(p.ok ? p.concurrence[j] : std::nan(""));
        tab.rows.push_back(std::move(row));
    }
    for (const auto& p : r.points)
        for (std::size_t j = 0; j < hm.x.size(); ++j) hm.z.push_back(p.ok ? p.concurrence[j] : std::nan(""));
    w.table(name, tab);
    w.svg(name, plot::render(hm));
}

SweepResult time_sweep(config::AxisName name, double lo, double hi, int count, double fixed, int workers, int k_max,
                       int n_t) {
    auto cfg = base_config(k_max, n_t);
    cfg.params = name == config::AxisName::Eps0 ? model::default_params(0.0, fixed) : model::default_params(fixed, 0.0);
    cfg.axis1 = axis(name, lo, hi, count);
    cfg.schedule = config::TimeSchedule{0, 6, 10};
    cfg.outputs = {true, true, false, false};
    return run_sweep(cfg, workers);
}

void rate_panel(Writer& w, const std::string& name, const SweepResult& r, const std::vector<int>& ns) {
    plot::LinePlot lp;
    lp.title = "Photon-resolved relaxation terms, eps0/omega = 4.1";
    lp.xlabel = "A/omega";
    lp.ylabel = "log10 Gamma_r^(n)";
    Table tab;
    tab.header = {"A_over_omega"};
    for (int n : ns) tab.header.push_back("gamma_r(" + std::to_string(n) + ")");
    for (const auto& p : r.points) {
        std::vector<double> row{p.x1};
        for (int n : ns) {
            const auto it = p.rates.find(n);
            row.push_back(it == p.rates.end() ? std::nan("") : it->second);
        }
        tab.rows.push_back(std::move(row));
    }
    for (std::size_t k = 0; k < ns.size(); ++k) {
        plot::Series s{"n = " + std::to_string(ns[k]), {}, {}, "", false};
        for (const auto& row : tab.rows) {
            s.x.push_back(row[0]);
            const double v = row[k + 1];
            s.y.push_back(v > 0.0 ? std::log10(v) : std::nan(""));
        }
        lp.series.push_back(std::move(s));
    }
    w.table(name, tab);
    w.svg(name, plot::render(lp));
}

} // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig3a",
                                              "fig3b", "fig4a", "fig4b", "sfig1", "sfig2"};
    return ids;
}

std::vector<std::string> reproduce_figure(const std::string& id, const std::string& dir, int workers, int k_max,
                                          int n_t) {
    bool known = false;
    for (const auto& f : figure_ids()) known = known || f == id;
    if (!known) throw InvalidArgument("unknown figure id '" + id + "'");
    Writer w(dir);

    if (id == "fig1a") {
        const auto r3 = amplitude_sweep(3.0, 0.0, 6.0, 241, false, workers, k_max, n_t);
        const auto r41 = amplitude_sweep(4.1, 0.0, 6.0, 241, false, workers, k_max, n_t);
        Table tab;
        tab.header = {"A_over_omega", "C_inf(eps0/omega=3)", "C_inf(eps0/omega=4.1)"};
        plot::LinePlot lp;
        lp.title = "Steady-state concurrence";
        lp.xlabel = "A/omega";
        lp.ylabel = "C_inf";
        lp.y_range = {{0.0, 1.0}};
        plot::Series s3{"eps0/omega = 3", {}, {}, "#2ca02c", false};
        plot::Series s41{"eps0/omega = 4.1", {}, {}, "#000000", false};
        for (std::size_t i = 0; i < r3.points.size(); ++i) {
            tab.rows.push_back({r3.points[i].x1, r3.points[i].c_inf, r41.points[i].c_inf});
            s3.x.push_back(r3.points[i].x1);
            s3.y.push_back(r3.points[i].c_inf);
            s41.x.push_back(r41.points[i].x1);
            s41.y.push_back(r41.points[i].c_inf);
        }
        lp.series = {s3, s41};
        w.table("fig1a", tab);
        w.svg("fig1a", plot::render(lp));
    } else if (id == "fig1b") {
        auto cfg = base_config(k_max, n_t);
        cfg.params = model::default_params();
        cfg.axis1 = axis(config::AxisName::Eps0, 2.5, 4.5, 121);
        cfg.axis2 = axis(config::AxisName::A, 0.0, 6.0, 121);
        const auto r = run_sweep(cfg, workers);
        w.sweep("fig1b_sweep", r);
        plot::Heatmap hm;
        hm.title = "Steady-state concurrence";
        hm.xlabel = "eps0/omega";
        hm.ylabel = "A/omega";
        hm.zlabel = "C_inf";
        for (int i = 0; i < r.nx(); ++i) hm.x.push_back(cfg.axis1->value(i));
        for (int j = 0; j < r.ny(); ++j) hm.y.push_back(cfg.axis2->value(j));
        Table tab;
        tab.header = {"eps0_over_omega", "A_over_omega", "C_inf"};
        for (const auto& p : r.points) {
            hm.z.push_back(p.c_inf);
            tab.rows.push_back({p.x1, p.x2, p.c_inf});
        }
        w.table("fig1b", tab);
        w.svg("fig1b", plot::render(hm));
    } else if (id == "fig1c") {
        energy_fan(w, "fig1c", 0.0, 5.0, 501, false);
    } else if (id == "fig2a") {
        const auto r = time_sweep(config::AxisName::Eps0, 2.5, 4.5, 81, kDriveAmplitude, workers, k_max, n_t);
        w.sweep("fig2a_sweep", r);
        concurrence_map(w, "fig2a", r, "eps0/omega", "Concurrence, A/omega = 3.8");
    } else if (id == "fig2b") {
        const auto sched = dynamics::log_schedule(0, 7, 40);
        const auto t3 = trajectory(3.0, kDriveAmplitude, sched, k_max, n_t);
        const auto t41 = trajectory(4.1, kDriveAmplitude, sched, k_max, n_t);
        Table tab;
        tab.header = {"t_over_T", "C(eps0/omega=3)", "C(eps0/omega=4.1)"};
        for (std::size_t i = 0; i < sched.size(); ++i)
            tab.rows.push_back({static_cast<double>(sched[i]), t3.record.concurrence[i], t41.record.concurrence[i]});
        plot::LinePlot lp;
        lp.title = "Concurrence, A/omega = 3.8";
        lp.xlabel = "t/T";
        lp.ylabel = "C";
        lp.log_x = true;
        lp.y_range = {{0.0, 1.0}};
        lp.series = {{"eps0/omega = 3", as_double(sched), t3.record.concurrence, "#2ca02c", false},
                     {"eps0/omega = 4.1", as_double(sched), t41.record.concurrence, "#000000", false}};
        w.table("fig2b", tab);
        w.svg("fig2b", plot::render(lp));
    } else if (id == "fig3a") {
        tomography_figure(w, "fig3a", 4.1, k_max, n_t);
    } else if (id == "fig3b") {
        tomography_figure(w, "fig3b", 3.0, k_max, n_t);
    } else if (id == "fig4a") {
        const auto r = time_sweep(config::AxisName::A, 0.0, 6.0, 121, 4.1, workers, k_max, n_t);
        w.sweep("fig4a_sweep", r);
        concurrence_map(w, "fig4a", r, "A/omega", "Concurrence, eps0/omega = 4.1");
    } else if (id == "fig4b") {
        const auto r = amplitude_sweep(4.1, 0.0, 6.0, 241, true, workers, k_max, n_t);
        rate_panel(w, "fig4b", r, {0, -3});
    } else if (id == "sfig1") {
        tomography_figure(w, "sfig1a", 2.75, k_max, n_t);
        tomography_figure(w, "sfig1b", 3.0, k_max, n_t);
        tomography_figure(w, "sfig1c", 3.25, k_max, n_t);
        energy_fan(w, "sfig1d", 2.0, 5.0, 301, true);
    } else if (id == "sfig2") {
        const auto r = amplitude_sweep(4.1, 0.0, 6.0, 241, true, workers, k_max, n_t);
        w.sweep("sfig2_sweep", r);
        plot::LinePlot c;
        c.title = "Steady-state concurrence, eps0/omega = 4.1";
        c.xlabel = "A/omega";
        c.ylabel = "C_inf";
        c.y_range = {{0.0, 1.0}};
        plot::Series cs{"C_inf", {}, {}, "#000000", false};
        plot::LinePlot pp;
        pp.title = "Steady-state populations, eps0/omega = 4.1";
        pp.xlabel = "A/omega";
        pp.ylabel = "rho_kk (steady state)";
        pp.y_range = {{0.0, 1.0}};
        std::array<plot::Series, 4> ps;
        Table tab;
        tab.header = {"A_over_omega", "C_inf", "rho00", "rho11", "rho22", "rho33"};
        for (int k = 0; k < 4; ++k) ps[k] = {"rho_" + std::to_string(k) + std::to_string(k), {}, {}, kStateColor[k], false};
        for (const auto& p : r.points) {
            cs.x.push_back(p.x1);
            cs.y.push_back(p.c_inf);
            std::vector<double> row{p.x1, p.c_inf};
            for (int k = 0; k < 4; ++k) {
                ps[k].x.push_back(p.x1);
                ps[k].y.push_back(p.populations[k]);
                row.push_back(p.populations[k]);
            }
            tab.rows.push_back(std::move(row));
        }
        c.series = {cs};
        pp.series.assign(ps.begin(), ps.end());
        w.table("sfig2ab", tab);
        w.svg("sfig2a", plot::render(c));
        w.svg("sfig2b", plot::render(pp));
        rate_panel(w, "sfig2c", r, {2, 0, -1, -2, -3, -4});
    }
    return w.written();
}

} // namespace floqent::sweep
