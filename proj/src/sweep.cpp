#include "floqent/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "floqent/dissipator.hpp"
#include "floqent/dynamics.hpp"
#include "floqent/entanglement.hpp"
#include "floqent/errors.hpp"
#include "floqent/floquet.hpp"
#include "floqent/twolevel.hpp"

namespace floqent::sweep {

using nlohmann::json;

namespace {

const entanglement::DensityTolerance kSteadyTolerance{1e-8, 1e-8, 1e-2};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string tag_string(const std::vector<model::ResonanceTag>& tags) {
    std::ostringstream os;
    for (std::size_t i = 0; i < tags.size(); ++i) {
        if (i) os << ';';
        os << model::to_string(tags[i].kind) << "(m=" << tags[i].m << ',' << model::to_string(tags[i].states[0])
           << '/' << model::to_string(tags[i].states[1]) << ')';
    }
    return os.str();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& v) { return v.is_null() ? kNaN : v.get<double>(); }

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "point_%06d.csv", index);
    return std::string("points/") + buf;
}

} // namespace

int SweepResult::nx() const { return config.axis1 ? config.axis1->count : 1; }
int SweepResult::ny() const { return config.axis2 ? config.axis2->count : 1; }

model::SystemParams point_params(const config::RunConfig& cfg, int index) {
    model::SystemParams p = cfg.params;
    auto apply = [&](const config::Axis& axis, int i) {
        const double v = axis.value(i) * p.omega;
        if (axis.name == config::AxisName::Eps0) p.eps0 = v;
        else p.A = v;
    };
    const int nx = cfg.axis1 ? cfg.axis1->count : 1;
    if (cfg.axis1) apply(*cfg.axis1, index % nx);
    if (cfg.axis2) apply(*cfg.axis2, index / nx);
    return p;
}

PointResult solve_point(const model::SystemParams& p, const config::RunConfig& cfg) {
    PointResult r;
    r.eps0_over_omega = p.eps0 / p.omega;
    r.A_over_omega = p.A / p.omega;
    r.c_inf = kNaN;
    r.populations.fill(kNaN);
    try {
        p.validate();
        const auto spectrum = model::static_spectrum(p);
        const auto basis = floquet::floquet_basis(p, cfg.n_t, cfg.k_max);
        r.k_max = basis.k_max;
        if (!basis.truncation_ok()) {
            throw NumericalError("Fourier truncation residual above 1e-8 at k_max = " + std::to_string(basis.k_max));
        }
        const auto elems = floquet::transition_elements(basis, model::build_coupling_op());
        const auto bath = dissipator::BathFunctions::from(p);
        const auto rates = dissipator::rate_tensor(basis, elems, bath);
        const auto steady = dynamics::steady_state(rates, basis, spectrum);
        const auto frames = dynamics::Frames::from(basis, spectrum);
        const Mat4 comp = dynamics::to_basis(steady.rho, dynamics::BasisTag::Computational, frames).entries;
        r.c_inf = entanglement::concurrence(comp, kSteadyTolerance).value;
        for (int k = 0; k < 4; ++k) r.populations[k] = steady.rho.entries(k, k).real();

        const auto tags = model::classify_resonances(p, cfg.resonance_window_over_omega * p.omega);
        r.resonances = tag_string(tags);

        if (cfg.outputs.spectrum) {
            for (int k = 0; k < 4; ++k) {
                r.energies[k] = spectrum.energies(k);
                r.quasi[k] = basis.quasi(k);
            }
        }
        if (cfg.outputs.rates && !tags.empty()) {
            // Near the centre of an avoided crossing no Floquet state is
            // identifiable with an H_0 level; the point keeps its steady state.
            try {
                const auto pair = twolevel::select_pair(basis, spectrum, tags.front());
                std::array<double, 4> fpop{};
                for (int k = 0; k < 4; ++k) fpop[k] = steady.rho_floquet(k, k).real();
                const auto pr = twolevel::photon_rates(basis, elems, bath, spectrum, pair, fpop);
                for (int n = -cfg.rate_n_max; n <= cfg.rate_n_max; ++n) r.rates[n] = pr.rate(n);
            } catch (const NumericalError& e) {
                r.error = std::string("rates skipped: ") + e.what();
            }
        }
        if (cfg.schedule && (cfg.outputs.concurrence || cfg.outputs.populations)) {
            const auto sched = dynamics::log_schedule(cfg.schedule->min_decade, cfg.schedule->max_decade,
                                                      cfg.schedule->per_decade);
            const auto rec = dynamics::evolve(rates, basis, spectrum, dynamics::initial_state(spectrum), sched);
            r.periods = rec.periods;
            r.concurrence = rec.concurrence;
            for (const auto& rho : rec.rho) {
                r.populations_t.push_back(
                    {rho.entries(0, 0).real(), rho.entries(1, 1).real(), rho.entries(2, 2).real(), rho.entries(3, 3).real()});
            }
        }
        r.ok = true;
    } catch (const NumericalError& e) {
        r.error = std::string("numerical: ") + e.what();
    } catch (const InvalidArgument& e) {
        r.error = std::string("invalid: ") + e.what();
    } catch (const std::exception& e) {
        r.error = std::string("error: ") + e.what();
    }
    return r;
}

SweepResult run_sweep(const config::RunConfig& cfg, int workers) {
    cfg.validate();
    if (workers < 1) throw InvalidArgument("run_sweep: workers must be at least 1");
    SweepResult out;
    out.config = cfg;
    out.config_hash = config::hash(cfg);
    out.n_t = cfg.n_t;
    const int nx = out.nx();
    const int total = nx * out.ny();
    out.points.resize(total);

    std::atomic<int> next{0};
    auto work = [&] {
        for (int i = next++; i < total; i = next++) {
            PointResult r = solve_point(point_params(cfg, i), cfg);
            r.index = i;
            r.x1 = cfg.axis1 ? cfg.axis1->value(i % nx) : 0.0;
            r.x2 = cfg.axis2 ? cfg.axis2->value(i / nx) : 0.0;
            out.points[i] = std::move(r);
        }
    };
    const int n = std::min(workers, total);
    std::vector<std::thread> pool;
    for (int k = 1; k < n; ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return out;
}

json to_json(const SweepResult& r) {
    json cols;
    auto col = [&](const char* name, auto getter) {
        json a = json::array();
        for (const auto& p : r.points) a.push_back(getter(p));
        cols[name] = std::move(a);
    };
    col("index", [](const PointResult& p) { return json(p.index); });
    col("x1", [](const PointResult& p) { return number_or_null(p.x1); });
    col("x2", [](const PointResult& p) { return number_or_null(p.x2); });
    col("eps0_over_omega", [](const PointResult& p) { return number_or_null(p.eps0_over_omega); });
    col("A_over_omega", [](const PointResult& p) { return number_or_null(p.A_over_omega); });
    col("ok", [](const PointResult& p) { return json(p.ok); });
    col("error", [](const PointResult& p) { return json(p.error); });
    col("k_max", [](const PointResult& p) { return json(p.k_max); });
    col("c_inf", [](const PointResult& p) { return number_or_null(p.c_inf); });
    col("resonances", [](const PointResult& p) { return json(p.resonances); });
    static const char* rho[] = {"rho00", "rho11", "rho22", "rho33"};
    static const char* en[] = {"E0", "E1", "E2", "E3"};
    static const char* qu[] = {"q0", "q1", "q2", "q3"};
    for (int k = 0; k < 4; ++k) {
        col(rho[k], [k](const PointResult& p) { return number_or_null(p.populations[k]); });
    }
    if (r.config.outputs.spectrum) {
        for (int k = 0; k < 4; ++k) {
            col(en[k], [k](const PointResult& p) { return number_or_null(p.energies[k]); });
            col(qu[k], [k](const PointResult& p) { return number_or_null(p.quasi[k]); });
        }
    }
    if (r.config.outputs.rates) {
        for (int n = -r.config.rate_n_max; n <= r.config.rate_n_max; ++n) {
            const std::string name = "gamma_r(" + std::to_string(n) + ")";
            json a = json::array();
            for (const auto& p : r.points) {
                const auto it = p.rates.find(n);
                a.push_back(it == p.rates.end() ? json(nullptr) : number_or_null(it->second));
            }
            cols[name] = std::move(a);
        }
    }
    json series = json::array();
    for (const auto& p : r.points) series.push_back(p.periods.empty() ? "" : csv_name(p.index));
    cols["series_file"] = std::move(series);

    return {{"format", "floqent-sweep"},
            {"version", r.version},
            {"config_hash", r.config_hash},
            {"n_t", r.n_t},
            {"grid", {{"nx", r.nx()}, {"ny", r.ny()}}},
            {"config", config::to_json(r.config)},
            {"columns", std::move(cols)}};
}

SweepResult from_json(const json& doc) {
    if (doc.value("format", "") != "floqent-sweep") throw InvalidArgument("not a sweep result document");
    SweepResult r;
    r.config = config::parse(doc.at("config"));
    r.config_hash = doc.at("config_hash").get<std::string>();
    r.version = doc.at("version").get<std::string>();
    r.n_t = doc.at("n_t").get<int>();
    const json& cols = doc.at("columns");
    const std::size_t n = cols.at("index").size();
    r.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        PointResult& p = r.points[i];
        p.index = cols.at("index")[i].get<int>();
        p.x1 = number_from(cols.at("x1")[i]);
        p.x2 = number_from(cols.at("x2")[i]);
        p.eps0_over_omega = number_from(cols.at("eps0_over_omega")[i]);
        p.A_over_omega = number_from(cols.at("A_over_omega")[i]);
        p.ok = cols.at("ok")[i].get<bool>();
        p.error = cols.at("error")[i].get<std::string>();
        p.k_max = cols.at("k_max")[i].get<int>();
        p.c_inf = number_from(cols.at("c_inf")[i]);
        p.resonances = cols.at("resonances")[i].get<std::string>();
        const std::string idx[] = {"0", "1", "2", "3"};
        for (int k = 0; k < 4; ++k) {
            p.populations[k] = number_from(cols.at("rho" + idx[k] + idx[k])[i]);
            if (r.config.outputs.spectrum) {
                p.energies[k] = number_from(cols.at("E" + idx[k])[i]);
                p.quasi[k] = number_from(cols.at("q" + idx[k])[i]);
            }
        }
        if (r.config.outputs.rates) {
            for (int m = -r.config.rate_n_max; m <= r.config.rate_n_max; ++m) {
                const json& v = cols.at("gamma_r(" + std::to_string(m) + ")")[i];
                if (!v.is_null()) p.rates[m] = v.get<double>();
            }
        }
    }
    return r;
}

std::string series_csv(const PointResult& p) {
    std::ostringstream os;
    os << "t_over_T,concurrence,rho00,rho11,rho22,rho33\n";
    for (std::size_t i = 0; i < p.periods.size(); ++i) {
        os << p.periods[i] << ',' << fmt17(p.concurrence[i]);
        for (double v : p.populations_t[i]) os << ',' << fmt17(v);
        os << '\n';
    }
    return os.str();
}

void write_result(const SweepResult& r, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const json doc = to_json(r);
    {
        std::ofstream out(fs::path(dir) / "sweep.json");
        if (!out) throw InvalidArgument("cannot write into " + dir);
        out << doc.dump(1) << '\n';
    }
    for (const auto& p : r.points) {
        if (p.periods.empty()) continue;
        fs::create_directories(fs::path(dir) / "points");
        std::ofstream out(fs::path(dir) / csv_name(p.index));
        out << series_csv(p);
    }
}

SweepResult read_result(const std::string& dir) {
    namespace fs = std::filesystem;
    std::ifstream in(fs::path(dir) / "sweep.json");
    if (!in) throw InvalidArgument("cannot open " + (fs::path(dir) / "sweep.json").string());
    const json doc = json::parse(in);
    SweepResult r = from_json(doc);
    const json& files = doc.at("columns").at("series_file");
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const std::string name = files[i].get<std::string>();
        if (name.empty()) continue;
        std::ifstream csv(fs::path(dir) / name);
        if (!csv) throw InvalidArgument("missing series file " + name);
        std::string line;
        std::getline(csv, line);
        PointResult& p = r.points[i];
        while (std::getline(csv, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::string cell;
            std::vector<std::string> cells;
            while (std::getline(ls, cell, ',')) cells.push_back(cell);
            if (cells.size() != 6) throw InvalidArgument("malformed row in " + name);
            p.periods.push_back(std::stoll(cells[0]));
            p.concurrence.push_back(std::strtod(cells[1].c_str(), nullptr));
            p.populations_t.push_back({std::strtod(cells[2].c_str(), nullptr), std::strtod(cells[3].c_str(), nullptr),
                                       std::strtod(cells[4].c_str(), nullptr), std::strtod(cells[5].c_str(), nullptr)});
        }
    }
    return r;
}

} // namespace floqent::sweep
