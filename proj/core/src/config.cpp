#include "floq/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "floq/errors.hpp"
#include "floq/json_io.hpp"

namespace floq {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& section,
                    const std::set<std::string>& allowed) {
    for (const auto& item : obj.items()) {
        if (!allowed.contains(item.key()))
            throw ConfigError("unknown key \"" + item.key() + "\" in section \"" +
                              section + "\"");
    }
}

template <typename T>
void read_into(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

void parse_flow(const json& j, FlowConfig& out) {
    reject_unknown(j, "flow",
                   {"type", "gamma", "angle0", "seed", "hold_rate", "states", "state0"});
    read_into(j, "type", out.type);
    read_into(j, "gamma", out.gamma);
    read_into(j, "angle0", out.angle0);
    read_into(j, "seed", out.seed);
    read_into(j, "hold_rate", out.hold_rate);
    read_into(j, "states", out.states);
    read_into(j, "state0", out.state0);
}

void parse_coeffs(const json& j, CoeffConfig& out) {
    reject_unknown(j, "coeffs", {"a0", "a1", "b0", "b1", "a", "b"});
    if (j.contains("a") || j.contains("b")) {
        out.tables = true;
        read_into(j, "a", out.a_table);
        read_into(j, "b", out.b_table);
    } else {
        out.tables = false;
        read_into(j, "a0", out.a0);
        read_into(j, "a1", out.a1);
        read_into(j, "b0", out.b0);
        read_into(j, "b1", out.b1);
    }
}

void parse_initial(const json& j, InitialConfig& out) {
    reject_unknown(j, "initial", {"head", "tail"});
    read_into(j, "head", out.head);
    if (j.contains("tail")) {
        const auto& t = j.at("tail");
        if (t.is_string()) {
            const std::string s = t.get<std::string>();
            if (s != "zero")
                throw ConfigError("initial.tail string must be \"zero\"");
            out.tail_kind = "zero";
        } else if (t.is_number()) {
            out.tail_kind = "const";
            out.tail_value = t.get<double>();
        } else if (t.is_array()) {
            out.tail_kind = "values";
            out.tail_values = t.get<std::vector<double>>();
        } else {
            throw ConfigError("initial.tail must be \"zero\", a number, or an array");
        }
    }
}

void parse_sweep(const json& j, SweepConfig& out) {
    reject_unknown(j, "sweep", {"vary", "coefficient", "values"});
    read_into(j, "vary", out.vary);
    read_into(j, "coefficient", out.coefficient);
    read_into(j, "values", out.values);
}

} // namespace

RunConfig parse_config_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown(j, "<root>",
                   {"flow", "coeffs", "grid", "run", "output", "initial", "sweep"});

    RunConfig cfg;
    try {
        if (j.contains("flow")) parse_flow(j.at("flow"), cfg.flow);
        if (j.contains("coeffs")) parse_coeffs(j.at("coeffs"), cfg.coeffs);
        if (j.contains("grid")) {
            reject_unknown(j.at("grid"), "grid", {"m", "p"});
            read_into(j.at("grid"), "m", cfg.grid.m);
            read_into(j.at("grid"), "p", cfg.grid.p);
        }
        if (j.contains("run")) {
            reject_unknown(j.at("run"), "run",
                           {"horizon", "tol", "max_pullback", "ensemble_nodes"});
            read_into(j.at("run"), "horizon", cfg.run.horizon);
            read_into(j.at("run"), "tol", cfg.run.tol);
            read_into(j.at("run"), "max_pullback", cfg.run.max_pullback);
            read_into(j.at("run"), "ensemble_nodes", cfg.run.ensemble_nodes);
        }
        if (j.contains("output")) {
            reject_unknown(j.at("output"), "output", {"dir", "formats"});
            read_into(j.at("output"), "dir", cfg.output.dir);
            read_into(j.at("output"), "formats", cfg.output.formats);
        }
        if (j.contains("initial")) parse_initial(j.at("initial"), cfg.initial);
        if (j.contains("sweep")) parse_sweep(j.at("sweep"), cfg.sweep);
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("config field has the wrong type: ") + ex.what());
    }
    validate_config(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void validate_config(const RunConfig& cfg) {
    if (cfg.flow.type != "torus" && cfg.flow.type != "telegraph")
        throw ConfigError("flow.type must be \"torus\" or \"telegraph\"");
    if (cfg.flow.type == "torus") {
        if (cfg.coeffs.tables)
            throw ConfigError("torus flow takes harmonic coefficients a0,a1,b0,b1");
        if (cfg.coeffs.b0 < std::abs(cfg.coeffs.b1))
            throw ConfigError(
                "coefficient nonnegativity violated: the delay coefficient "
                "b(driver) = b0 + b1 cos must satisfy b0 >= |b1| so that b >= 0 "
                "at every driver point");
        if (!(cfg.flow.angle0 >= 0.0 && cfg.flow.angle0 < 1.0))
            throw ConfigError("flow.angle0 must lie in [0, 1)");
    } else {
        if (!cfg.coeffs.tables)
            throw ConfigError("telegraph flow takes coefficient tables a, b");
        if (cfg.flow.states < 2) throw ConfigError("flow.states must be >= 2");
        if (!(cfg.flow.hold_rate > 0.0))
            throw ConfigError("flow.hold_rate must be > 0");
        if (cfg.flow.state0 < 0 || cfg.flow.state0 >= cfg.flow.states)
            throw ConfigError("flow.state0 out of range");
        if (static_cast<int>(cfg.coeffs.a_table.size()) != cfg.flow.states ||
            static_cast<int>(cfg.coeffs.b_table.size()) != cfg.flow.states)
            throw ConfigError("coefficient tables must have one entry per state");
        for (double b : cfg.coeffs.b_table)
            if (b < 0.0)
                throw ConfigError(
                    "coefficient nonnegativity violated: every table entry of b "
                    "must be >= 0");
    }
    if (cfg.grid.m < 8) throw ConfigError("grid.m must be >= 8");
    if (!(cfg.grid.p > 1.0) || !std::isfinite(cfg.grid.p))
        throw ConfigError("grid.p must be a finite real > 1");
    if (cfg.run.horizon < 10) throw ConfigError("run.horizon must be >= 10");
    if (!(cfg.run.tol > 0.0)) throw ConfigError("run.tol must be > 0");
    if (cfg.run.max_pullback < 2) throw ConfigError("run.max_pullback must be >= 2");
    if (cfg.run.ensemble_nodes < 1)
        throw ConfigError("run.ensemble_nodes must be >= 1");
    if (cfg.output.formats.empty())
        throw ConfigError("output.formats must name at least one of json, csv");
    for (const auto& f : cfg.output.formats)
        if (f != "json" && f != "csv")
            throw ConfigError("output.formats entries must be \"json\" or \"csv\"");
    if (cfg.initial.tail_kind != "zero" && cfg.initial.tail_kind != "const" &&
        cfg.initial.tail_kind != "values")
        throw ConfigError("initial.tail kind must be zero, const, or values");
    if (!std::isfinite(cfg.initial.head))
        throw ConfigError("initial.head must be finite");
    if (!cfg.sweep.vary.empty()) {
        if (cfg.sweep.vary != "grid_m" && cfg.sweep.vary != "horizon" &&
            cfg.sweep.vary != "coefficient")
            throw ConfigError("sweep.vary must be grid_m, horizon, or coefficient");
        if (cfg.sweep.values.empty())
            throw ConfigError("sweep.values must be nonempty");
        if (cfg.sweep.vary == "coefficient") {
            if (cfg.flow.type != "torus")
                throw ConfigError("coefficient sweeps need the torus flow");
            const std::string& c = cfg.sweep.coefficient;
            if (c != "a0" && c != "a1" && c != "b0" && c != "b1")
                throw ConfigError("sweep.coefficient must be one of a0, a1, b0, b1");
        }
        if (cfg.sweep.vary == "grid_m")
            for (double v : cfg.sweep.values)
                if (v < 8.0 || v != std::floor(v))
                    throw ConfigError("sweep.values for grid_m must be integers >= 8");
        if (cfg.sweep.vary == "horizon")
            for (double v : cfg.sweep.values)
                if (v < 10.0 || v != std::floor(v))
                    throw ConfigError("sweep.values for horizon must be integers >= 10");
    }
}

std::string config_json(const RunConfig& cfg) {
    JsonWriter w;
    w.begin_object();
    w.key("flow").begin_object();
    w.key("type").value(cfg.flow.type);
    if (cfg.flow.type == "torus") {
        w.key("gamma").value(cfg.flow.gamma);
        w.key("angle0").value(cfg.flow.angle0);
        w.key("seed").value(cfg.flow.seed);
    } else {
        w.key("seed").value(cfg.flow.seed);
        w.key("hold_rate").value(cfg.flow.hold_rate);
        w.key("states").value(cfg.flow.states);
        w.key("state0").value(cfg.flow.state0);
    }
    w.end_object();

    w.key("coeffs").begin_object();
    if (cfg.coeffs.tables) {
        w.key("a").begin_array();
        for (double v : cfg.coeffs.a_table) w.value(v);
        w.end_array();
        w.key("b").begin_array();
        for (double v : cfg.coeffs.b_table) w.value(v);
        w.end_array();
    } else {
        w.key("a0").value(cfg.coeffs.a0);
        w.key("a1").value(cfg.coeffs.a1);
        w.key("b0").value(cfg.coeffs.b0);
        w.key("b1").value(cfg.coeffs.b1);
    }
    w.end_object();

    w.key("grid").begin_object();
    w.key("m").value(cfg.grid.m);
    w.key("p").value(cfg.grid.p);
    w.end_object();

    w.key("run").begin_object();
    w.key("horizon").value(cfg.run.horizon);
    w.key("tol").value(cfg.run.tol);
    w.key("max_pullback").value(cfg.run.max_pullback);
    w.key("ensemble_nodes").value(cfg.run.ensemble_nodes);
    w.end_object();

    w.key("output").begin_object();
    w.key("dir").value(cfg.output.dir);
    w.key("formats").begin_array();
    for (const auto& f : cfg.output.formats) w.value(f);
    w.end_array();
    w.end_object();

    w.key("initial").begin_object();
    w.key("head").value(cfg.initial.head);
    w.key("tail");
    if (cfg.initial.tail_kind == "zero") {
        w.value("zero");
    } else if (cfg.initial.tail_kind == "const") {
        w.value(cfg.initial.tail_value);
    } else {
        w.begin_array();
        for (double v : cfg.initial.tail_values) w.value(v);
        w.end_array();
    }
    w.end_object();

    if (!cfg.sweep.vary.empty()) {
        w.key("sweep").begin_object();
        w.key("vary").value(cfg.sweep.vary);
        if (cfg.sweep.vary == "coefficient")
            w.key("coefficient").value(cfg.sweep.coefficient);
        w.key("values").begin_array();
        for (double v : cfg.sweep.values) w.value(v);
        w.end_array();
        w.end_object();
    }
    w.end_object();
    return w.str();
}

DelayCocycle make_cocycle(const RunConfig& cfg) {
    GridSpec grid(cfg.grid.m, cfg.grid.p);
    if (cfg.flow.type == "torus") {
        Flow flow = TorusFlow{cfg.flow.gamma};
        CoeffSpec coeffs = CoeffSpec::harmonic(cfg.coeffs.a0, cfg.coeffs.a1,
                                               cfg.coeffs.b0, cfg.coeffs.b1);
        return DelayCocycle(grid, flow, coeffs);
    }
    TelegraphFlow tf;
    tf.states = cfg.flow.states;
    tf.tick = grid.step();
    tf.hold_rate = cfg.flow.hold_rate;
    tf.seed = cfg.flow.seed;
    Flow flow = tf;
    CoeffSpec coeffs = CoeffSpec::tables(cfg.coeffs.a_table, cfg.coeffs.b_table);
    return DelayCocycle(grid, flow, coeffs);
}

BasePoint anchor_point(const RunConfig& cfg) {
    if (cfg.flow.type == "torus") return torus_point(cfg.flow.angle0);
    return TelegraphPoint{0, cfg.flow.state0};
}

StateVector initial_state(const RunConfig& cfg, const GridSpec& g) {
    StateVector u = zero_state(g);
    u.head = cfg.initial.head;
    if (cfg.initial.tail_kind == "const") {
        for (double& t : u.tail) t = cfg.initial.tail_value;
    } else if (cfg.initial.tail_kind == "values") {
        if (static_cast<int>(cfg.initial.tail_values.size()) != g.points())
            throw ConfigError("initial.tail array must have m + 1 entries");
        u.tail = cfg.initial.tail_values;
    }
    return u;
}

RunParams run_params(const RunConfig& cfg) {
    RunParams p;
    p.horizon = cfg.run.horizon;
    p.tol = cfg.run.tol;
    p.max_pullback = cfg.run.max_pullback;
    p.seed = cfg.flow.seed;
    return p;
}

} // namespace floq
