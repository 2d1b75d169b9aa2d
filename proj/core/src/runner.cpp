#include "floq/runner.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "floq/errors.hpp"
#include "floq/json_io.hpp"
#include "floq/parallel.hpp"

namespace floq {

namespace {

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string meta_fragment() {
    return "\"meta\":{\"timestamp\":\"" + timestamp_utc() + "\"}";
}

bool wants(const RunConfig& cfg, const std::string& fmt) {
    for (const auto& f : cfg.output.formats)
        if (f == fmt) return true;
    return false;
}

std::filesystem::path ensure_outdir(const RunConfig& cfg) {
    const std::filesystem::path dir(cfg.output.dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_run_echo(const RunConfig& cfg, const std::filesystem::path& dir) {
    const std::string out =
        "{\"config\":" + config_json(cfg) + "," + meta_fragment() + "}";
    atomic_write_file(dir / "run.json", out + "\n");
}

} // namespace

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string bundle_report_json(const BundleReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("lambda1").value(report.lambda1);
    w.key("lambda1_dual").value(report.lambda1_dual);
    w.key("lambda2").value(report.lambda2);
    w.key("sigma").value(report.sigma);
    w.key("pair_ww").value(report.pair_ww);
    w.key("pullback_iters").value(report.pullback_iters);
    w.key("contraction_rate").value(report.contraction_rate);
    w.key("temperedness_slope").value(report.temperedness_slope);
    w.key("grid_m").value(report.grid_m);
    w.key("p").value(report.p);
    w.key("horizon").value(report.horizon);
    w.key("flow").value(report.flow);
    w.key("seed").value(report.seed);
    w.end_object();
    return w.str();
}

std::string battery_json(const std::vector<OracleResult>& results) {
    JsonWriter w;
    w.begin_object();
    w.key("identities").begin_array();
    for (const auto& r : results) {
        w.begin_object();
        w.key("name").value(r.name);
        w.key("residual").value(r.residual);
        w.key("tolerance").value(r.tolerance);
        w.key("pass").value(r.pass);
        if (!r.witness.empty()) w.key("witness").value(r.witness);
        w.end_object();
    }
    w.end_array();
    w.key("all_pass").value(battery_passes(results));
    w.end_object();
    std::string out = w.str();
    out.insert(out.size() - 1, "," + meta_fragment());
    return out;
}

int run_simulate(const RunConfig& cfg) {
    const DelayCocycle sys = make_cocycle(cfg);
    const BasePoint w0 = anchor_point(cfg);
    const StateVector u0 = initial_state(cfg, sys.grid());
    const TrajectoryRecord rec =
        sys.trajectory(w0, static_cast<double>(cfg.run.horizon), u0);

    const auto dir = ensure_outdir(cfg);
    if (wants(cfg, "csv")) {
        std::ostringstream os;
        rec.write_csv(os);
        atomic_write_file(dir / "trajectory.csv", os.str());
    }
    if (wants(cfg, "json")) write_run_echo(cfg, dir);
    return 0;
}

int run_bundle(const RunConfig& cfg) {
    const DelayCocycle sys = make_cocycle(cfg);
    const BasePoint w0 = anchor_point(cfg);
    const RunParams params = run_params(cfg);
    const auto dir = ensure_outdir(cfg);

    BundleReport report;
    std::vector<std::string> issues;
    try {
        const BundleWorkspace ws =
            build_workspace(sys, w0, params.horizon, params.tol, params.max_pullback);
        const SecondExponent se = second_exponent(sys, ws, params.seed);
        report = make_report(sys, ws, se, params);
        issues = validate_bundle(sys, ws, report);

        if (wants(cfg, "csv")) {
            std::ostringstream os;
            os << "s,d\n";
            char buf[64];
            for (std::size_t k = 0; k < ws.pullback_diag.distances.size(); ++k) {
                std::snprintf(buf, sizeof(buf), "%d,%.17g\n",
                              static_cast<int>(2 * (k + 2)),
                              ws.pullback_diag.distances[k]);
                os << buf;
            }
            atomic_write_file(dir / "pullback_decay.csv", os.str());
        }
        if (wants(cfg, "json")) {
            std::string out = "{\"report\":" + bundle_report_json(report);
            if (!issues.empty()) {
                JsonWriter fails;
                fails.begin_array();
                for (const auto& s : issues) fails.value(s);
                fails.end_array();
                out += ",\"invariant_failures\":" + fails.str();
            }
            out += "," + meta_fragment() + "}";
            atomic_write_file(dir / "bundle.json", out + "\n");
        }
    } catch (const PullbackError& ex) {
        std::fprintf(stderr, "bundle: %s\n", ex.what());
        return 3;
    } catch (const SeparationError& ex) {
        std::fprintf(stderr, "bundle: %s\n", ex.what());
        return 3;
    } catch (const DegenerateBundleError& ex) {
        std::fprintf(stderr, "bundle: %s\n", ex.what());
        return 3;
    }
    if (!issues.empty()) {
        for (const auto& s : issues) std::fprintf(stderr, "bundle invariant: %s\n", s.c_str());
        return 3;
    }
    return 0;
}

int run_verify(const RunConfig& cfg, bool inject_fault) {
    const DelayCocycle sys = make_cocycle(cfg);
    const BasePoint w0 = anchor_point(cfg);
    BatteryOptions opts;
    opts.seed = cfg.flow.seed;
    opts.tol = cfg.run.tol;
    opts.max_pullback = cfg.run.max_pullback;
    opts.ensemble_nodes = cfg.run.ensemble_nodes;
    opts.inject_fault = inject_fault;
    const auto results = run_identity_battery(sys, w0, opts);

    const auto dir = ensure_outdir(cfg);
    atomic_write_file(dir / "battery.json", battery_json(results) + "\n");
    for (const auto& r : results)
        if (!r.pass)
            std::fprintf(stderr, "identity failed: %s residual=%.3g tol=%.3g (%s)\n",
                         r.name.c_str(), r.residual, r.tolerance, r.witness.c_str());
    return battery_passes(results) ? 0 : 1;
}

int run_sweep(const RunConfig& cfg, int threads) {
    if (cfg.sweep.vary.empty())
        throw ConfigError("sweep requires a sweep section in the config");
    const auto dir = ensure_outdir(cfg);

    const std::size_t n = cfg.sweep.values.size();
    std::vector<BundleReport> rows(n);
    std::vector<std::string> errors(n);
    auto job = [&](std::size_t i) {
        RunConfig c = cfg;
        const double v = cfg.sweep.values[i];
        if (cfg.sweep.vary == "grid_m")
            c.grid.m = static_cast<int>(v);
        else if (cfg.sweep.vary == "horizon")
            c.run.horizon = static_cast<int>(v);
        else if (cfg.sweep.coefficient == "a0")
            c.coeffs.a0 = v;
        else if (cfg.sweep.coefficient == "a1")
            c.coeffs.a1 = v;
        else if (cfg.sweep.coefficient == "b0")
            c.coeffs.b0 = v;
        else
            c.coeffs.b1 = v;
        try {
            validate_config(c);
            const DelayCocycle sys = make_cocycle(c);
            rows[i] = compute_bundle(sys, anchor_point(c), run_params(c));
        } catch (const std::exception& ex) {
            errors[i] = ex.what();
        }
    };
    parallel_for(n, threads, job);

    for (std::size_t i = 0; i < n; ++i)
        if (!errors[i].empty()) {
            std::fprintf(stderr, "sweep value %.17g: %s\n", cfg.sweep.values[i],
                         errors[i].c_str());
            return 3;
        }

    std::ostringstream os;
    os << cfg.sweep.vary
       << ",lambda1,lambda1_dual,lambda2,sigma,pair_ww,pullback_iters,"
          "contraction_rate,temperedness_slope,grid_m,p,horizon,flow,seed\n";
    for (std::size_t i = 0; i < n; ++i) {
        const BundleReport& r = rows[i];
        os << g17(cfg.sweep.values[i]) << ',' << g17(r.lambda1) << ','
           << g17(r.lambda1_dual) << ',' << g17(r.lambda2) << ',' << g17(r.sigma)
           << ',' << g17(r.pair_ww) << ',' << r.pullback_iters << ','
           << g17(r.contraction_rate) << ',' << g17(r.temperedness_slope) << ','
           << r.grid_m << ',' << g17(r.p) << ',' << r.horizon << ',' << r.flow
           << ',' << r.seed << '\n';
    }
    atomic_write_file(dir / "sweep.csv", os.str());
    return 0;
}

} // namespace floq
