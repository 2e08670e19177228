#include "floqent/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>

#include "floqent/errors.hpp"

namespace floqent::config {

using nlohmann::json;

namespace {

constexpr int kMaxDecade = 7;

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw InvalidArgument(where + ": missing \"" + key + "\"");
    return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_number()) throw InvalidArgument(where + "." + key + " must be a number");
    return v.get<double>();
}

int integer(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_number_integer()) throw InvalidArgument(where + "." + key + " must be an integer");
    return v.get<int>();
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw InvalidArgument(where + " must be an object");
    for (const auto& [k, v] : obj.items()) {
        if (!allowed.count(k)) throw InvalidArgument(where + ": unknown key \"" + k + "\"");
    }
}

// Scale that converts a quantity given in `units` into units of omega.
double to_omega_scale(const json& obj, const std::string& where, double omega) {
    const json& u = require(obj, "units", where);
    if (!u.is_string()) throw InvalidArgument(where + ".units must be a string");
    const std::string s = u.get<std::string>();
    if (s == "omega") return 1.0;
    if (s == "Delta1") return 1.0 / omega;
    throw InvalidArgument(where + ".units must be \"omega\" or \"Delta1\", got \"" + s + "\"");
}

Axis parse_axis(const json& obj, const std::string& where, double omega) {
    check_keys(obj, {"name", "units", "min", "max", "count"}, where);
    Axis a;
    const json& name = require(obj, "name", where);
    if (name == "eps0") {
        a.name = AxisName::Eps0;
    } else if (name == "A") {
        a.name = AxisName::A;
    } else {
        throw InvalidArgument(where + ".name must be \"eps0\" or \"A\"");
    }
    const double scale = to_omega_scale(obj, where, omega);
    a.min = number(obj, "min", where) * scale;
    a.max = number(obj, "max", where) * scale;
    a.count = integer(obj, "count", where);
    return a;
}

void validate_axis(const Axis& a, const char* which) {
    const std::string w(which);
    if (a.count < 2) throw InvalidArgument(w + ": count must be at least 2");
    if (!(a.min < a.max)) throw InvalidArgument(w + ": min must be below max");
    if (a.name == AxisName::A && a.min < 0.0) throw InvalidArgument(w + ": amplitude must be non-negative");
}

json axis_json(const Axis& a) {
    return {{"name", to_string(a.name)}, {"units", "omega"}, {"min", a.min}, {"max", a.max}, {"count", a.count}};
}

} // namespace

std::string to_string(AxisName a) { return a == AxisName::Eps0 ? "eps0" : "A"; }

double Axis::value(int i) const {
    if (i == count - 1) return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

void RunConfig::validate() const {
    params.validate();
    if (axis2 && !axis1) throw InvalidArgument("axis2 given without axis1");
    if (axis1) validate_axis(*axis1, "axis1");
    if (axis2) {
        validate_axis(*axis2, "axis2");
        if (axis2->name == axis1->name) throw InvalidArgument("axis1 and axis2 must differ");
    }
    if (schedule) {
        const auto& s = *schedule;
        if (s.min_decade < 0 || s.max_decade > kMaxDecade || s.min_decade > s.max_decade || s.per_decade < 1) {
            throw InvalidArgument("time_schedule: need 0 <= min_decade <= max_decade <= 7, points_per_decade >= 1");
        }
    }
    if (!(resonance_window_over_omega > 0.0)) throw InvalidArgument("resonance_window must be positive");
    if (rate_n_max < 0) throw InvalidArgument("rate_n_max must be non-negative");
    if (n_t < 256 || (n_t & (n_t - 1)) != 0) throw InvalidArgument("n_t must be a power of two, at least 256");
    if (k_max == 0 || k_max < -1) throw InvalidArgument("k_max must be positive, or -1 for automatic");
}

RunConfig parse(const json& doc) {
    check_keys(doc,
               {"params", "point", "axis1", "axis2", "time_schedule", "outputs", "resonance_window",
                "rate_n_max", "k_max", "n_t"},
               "config");
    RunConfig c;
    if (doc.contains("params")) {
        const json& p = doc.at("params");
        check_keys(p,
                   {"units", "delta1", "delta2", "J", "omega", "gamma_bath", "omega_c", "T_b", "eps0", "A"},
                   "params");
        const json& u = require(p, "units", "params");
        if (u != "Delta1") throw InvalidArgument("params.units must be \"Delta1\"");
        auto opt = [&](const char* key, double& dst) {
            if (p.contains(key)) dst = number(p, key, "params");
        };
        opt("delta1", c.params.delta1);
        opt("delta2", c.params.delta2);
        opt("J", c.params.J);
        opt("omega", c.params.omega);
        opt("gamma_bath", c.params.gamma_bath);
        opt("omega_c", c.params.omega_c);
        opt("T_b", c.params.T_b);
        opt("eps0", c.params.eps0);
        opt("A", c.params.A);
    }
    const double w = c.params.omega;
    if (doc.contains("point")) {
        const json& p = doc.at("point");
        check_keys(p, {"units", "eps0", "A"}, "point");
        const double scale = to_omega_scale(p, "point", w);
        if (p.contains("eps0")) c.params.eps0 = number(p, "eps0", "point") * scale * w;
        if (p.contains("A")) c.params.A = number(p, "A", "point") * scale * w;
    }
    if (doc.contains("axis1")) c.axis1 = parse_axis(doc.at("axis1"), "axis1", w);
    if (doc.contains("axis2")) c.axis2 = parse_axis(doc.at("axis2"), "axis2", w);
    if (doc.contains("time_schedule")) {
        const json& s = doc.at("time_schedule");
        check_keys(s, {"min_decade", "max_decade", "points_per_decade"}, "time_schedule");
        c.schedule = TimeSchedule{integer(s, "min_decade", "time_schedule"), integer(s, "max_decade", "time_schedule"),
                                  integer(s, "points_per_decade", "time_schedule")};
    }
    if (doc.contains("outputs")) {
        const json& o = doc.at("outputs");
        if (!o.is_array()) throw InvalidArgument("outputs must be an array");
        c.outputs = Outputs{false, false, false, false};
        for (const auto& item : o) {
            if (item == "concurrence") c.outputs.concurrence = true;
            else if (item == "populations") c.outputs.populations = true;
            else if (item == "rates") c.outputs.rates = true;
            else if (item == "spectrum") c.outputs.spectrum = true;
            else throw InvalidArgument("outputs: unknown entry " + item.dump());
        }
    }
    if (doc.contains("resonance_window")) {
        const json& r = doc.at("resonance_window");
        check_keys(r, {"units", "value"}, "resonance_window");
        c.resonance_window_over_omega = number(r, "value", "resonance_window") * to_omega_scale(r, "resonance_window", w);
    }
    if (doc.contains("rate_n_max")) c.rate_n_max = integer(doc, "rate_n_max", "config");
    if (doc.contains("k_max")) c.k_max = integer(doc, "k_max", "config");
    if (doc.contains("n_t")) c.n_t = integer(doc, "n_t", "config");
    c.validate();
    return c;
}

RunConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidArgument("config " + path + ": " + e.what());
    }
    return parse(doc);
}

json to_json(const RunConfig& c) {
    const auto& p = c.params;
    json doc = {
        {"params",
         {{"units", "Delta1"}, {"delta1", p.delta1}, {"delta2", p.delta2}, {"J", p.J}, {"omega", p.omega},
          {"gamma_bath", p.gamma_bath}, {"omega_c", p.omega_c}, {"T_b", p.T_b}, {"eps0", p.eps0}, {"A", p.A}}},
        {"resonance_window", {{"units", "omega"}, {"value", c.resonance_window_over_omega}}},
        {"rate_n_max", c.rate_n_max},
        {"k_max", c.k_max},
        {"n_t", c.n_t},
    };
    json outs = json::array();
    if (c.outputs.concurrence) outs.push_back("concurrence");
    if (c.outputs.populations) outs.push_back("populations");
    if (c.outputs.rates) outs.push_back("rates");
    if (c.outputs.spectrum) outs.push_back("spectrum");
    doc["outputs"] = outs;
    if (c.axis1) doc["axis1"] = axis_json(*c.axis1);
    if (c.axis2) doc["axis2"] = axis_json(*c.axis2);
    if (c.schedule) {
        doc["time_schedule"] = {{"min_decade", c.schedule->min_decade},
                                {"max_decade", c.schedule->max_decade},
                                {"points_per_decade", c.schedule->per_decade}};
    }
    return doc;
}

std::string hash(const RunConfig& c) {
    const std::string text = to_json(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace floqent::config
