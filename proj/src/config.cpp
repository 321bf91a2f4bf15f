#include "tcflow/config.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>

#include "tcflow/errors.hpp"
#include "tcflow/io.hpp"

namespace tcflow {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Checks that `obj` is an object whose keys all belong to `allowed`.
void check_object(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    require(obj.is_object(), "'" + path + "' must be an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        require(allowed.count(key) > 0, "unknown key '" + (path.empty() ? key : path + "." + key) + "'");
    }
}

std::string join_path(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

double get_double(const json& v, const std::string& path) {
    require(v.is_number(), "'" + path + "' must be a number");
    const double d = v.get<double>();
    require(std::isfinite(d), "'" + path + "' must be finite");
    return d;
}

int get_int(const json& v, const std::string& path) {
    require(v.is_number_integer(), "'" + path + "' must be an integer");
    const auto i = v.get<std::int64_t>();
    require(i >= std::numeric_limits<int>::min() && i <= std::numeric_limits<int>::max(),
            "'" + path + "' is out of range");
    return static_cast<int>(i);
}

std::uint64_t get_seed(const json& v, const std::string& path) {
    require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0),
            "'" + path + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

bool get_bool(const json& v, const std::string& path) {
    require(v.is_boolean(), "'" + path + "' must be a boolean");
    return v.get<bool>();
}

template <class F>
void with(const json& obj, const std::string& path, const char* key, F&& apply) {
    const auto it = obj.find(key);
    if (it != obj.end()) apply(*it, join_path(path, key));
}

}  // namespace

void RunConfig::validate(bool need_viscosity) const {
    require(r_inner.has_value(), "missing inner radius (--r1 or annulus.r_inner)");
    require(r_outer.has_value(), "missing outer radius (--r2 or annulus.r_outer)");
    (void)annulus();
    if (need_viscosity || viscosity) {
        require(viscosity.has_value(), "missing viscosity (--nu or flow.viscosity)");
        flow().validate();
    }
    require(std::isfinite(axial_gradient) && std::isfinite(pressure_offset),
            "axial gradient and pressure offset must be finite");
    require(std::isfinite(amplitude) && amplitude >= 0.0, "perturbation amplitude must be non-negative");
    (void)grid();
    solve_options().validate();
    for (double a : amplitudes) require(std::isfinite(a) && a >= 0.0, "amplitudes must be non-negative");
    for (const auto& [w1, w2] : omega_pairs)
        require(std::isfinite(w1) && std::isfinite(w2), "angular velocities must be finite");
    if (output_dir) require(!output_dir->empty(), "output_dir must not be empty");
}

Annulus RunConfig::annulus() const {
    require(r_inner && r_outer, "annulus radii are not set");
    return Annulus(*r_inner, *r_outer);
}

FlowConfig RunConfig::flow() const {
    require(viscosity.has_value(), "viscosity is not set");
    return FlowConfig{*viscosity, omega_inner, omega_outer};
}

double RunConfig::resolved_z_period() const {
    return z_period ? *z_period : default_z_period(annulus());
}

Grid RunConfig::grid() const { return Grid(annulus(), n_r, n_z, resolved_z_period(), n_theta); }

SolveOptions RunConfig::solve_options() const {
    SolveOptions o;
    o.newton_tol = newton_tol;
    o.max_newton = max_newton;
    o.ptc_initial_dt = ptc_initial_dt;
    o.stokes_mode = stokes_mode;
    o.imposed_axial_gradient = axial_gradient;
    o.exec = exec;
    return o;
}

SweepConfig RunConfig::sweep_config() const {
    SweepConfig s;
    s.annulus = annulus();
    s.viscosity = *viscosity;
    s.omega_pairs = omega_pairs;
    s.amplitudes = amplitudes;
    s.seeds = seeds;
    s.n_r = n_r;
    s.n_z = n_z;
    s.z_period = resolved_z_period();
    s.solver = solve_options();
    return s;
}

RunConfig parse_run_config(const json& doc) {
    RunConfig c;
    check_object(doc, "", {"annulus", "flow", "grid", "solver", "sweep", "perturbation", "output_dir"});

    with(doc, "", "annulus", [&](const json& o, const std::string& p) {
        check_object(o, p, {"r_inner", "r_outer"});
        with(o, p, "r_inner", [&](const json& v, const std::string& q) { c.r_inner = get_double(v, q); });
        with(o, p, "r_outer", [&](const json& v, const std::string& q) { c.r_outer = get_double(v, q); });
    });
    with(doc, "", "flow", [&](const json& o, const std::string& p) {
        check_object(o, p, {"viscosity", "omega_inner", "omega_outer", "axial_gradient", "pressure_offset"});
        with(o, p, "viscosity", [&](const json& v, const std::string& q) { c.viscosity = get_double(v, q); });
        with(o, p, "omega_inner", [&](const json& v, const std::string& q) { c.omega_inner = get_double(v, q); });
        with(o, p, "omega_outer", [&](const json& v, const std::string& q) { c.omega_outer = get_double(v, q); });
        with(o, p, "axial_gradient", [&](const json& v, const std::string& q) { c.axial_gradient = get_double(v, q); });
        with(o, p, "pressure_offset", [&](const json& v, const std::string& q) { c.pressure_offset = get_double(v, q); });
    });
    with(doc, "", "grid", [&](const json& o, const std::string& p) {
        check_object(o, p, {"n_r", "n_z", "z_period", "n_theta"});
        with(o, p, "n_r", [&](const json& v, const std::string& q) { c.n_r = get_int(v, q); });
        with(o, p, "n_z", [&](const json& v, const std::string& q) { c.n_z = get_int(v, q); });
        with(o, p, "z_period", [&](const json& v, const std::string& q) {
            if (!v.is_null()) c.z_period = get_double(v, q);
        });
        with(o, p, "n_theta", [&](const json& v, const std::string& q) {
            if (!v.is_null()) c.n_theta = get_int(v, q);
        });
    });
    with(doc, "", "solver", [&](const json& o, const std::string& p) {
        check_object(o, p, {"newton_tol", "max_newton", "ptc_initial_dt", "stokes_mode", "exec"});
        with(o, p, "newton_tol", [&](const json& v, const std::string& q) { c.newton_tol = get_double(v, q); });
        with(o, p, "max_newton", [&](const json& v, const std::string& q) { c.max_newton = get_int(v, q); });
        with(o, p, "ptc_initial_dt", [&](const json& v, const std::string& q) {
            if (!v.is_null()) c.ptc_initial_dt = get_double(v, q);
        });
        with(o, p, "stokes_mode", [&](const json& v, const std::string& q) { c.stokes_mode = get_bool(v, q); });
        with(o, p, "exec", [&](const json& v, const std::string& q) {
            require(v.is_string() && (v == "serial" || v == "parallel"),
                    "'" + q + "' must be \"serial\" or \"parallel\"");
            c.exec = v == "serial" ? Exec::serial : Exec::parallel;
        });
    });
    with(doc, "", "sweep", [&](const json& o, const std::string& p) {
        check_object(o, p, {"omega_pairs", "amplitudes", "seeds"});
        with(o, p, "omega_pairs", [&](const json& v, const std::string& q) {
            require(v.is_array(), "'" + q + "' must be an array of [omega_inner, omega_outer] pairs");
            for (std::size_t n = 0; n < v.size(); ++n) {
                const std::string e = q + "[" + std::to_string(n) + "]";
                require(v[n].is_array() && v[n].size() == 2, "'" + e + "' must be a pair");
                c.omega_pairs.emplace_back(get_double(v[n][0], e), get_double(v[n][1], e));
            }
        });
        with(o, p, "amplitudes", [&](const json& v, const std::string& q) {
            require(v.is_array(), "'" + q + "' must be an array");
            for (const auto& e : v) c.amplitudes.push_back(get_double(e, q));
        });
        with(o, p, "seeds", [&](const json& v, const std::string& q) {
            require(v.is_array(), "'" + q + "' must be an array");
            for (const auto& e : v) c.seeds.push_back(get_seed(e, q));
        });
    });
    with(doc, "", "perturbation", [&](const json& o, const std::string& p) {
        check_object(o, p, {"amplitude", "seed"});
        with(o, p, "amplitude", [&](const json& v, const std::string& q) { c.amplitude = get_double(v, q); });
        with(o, p, "seed", [&](const json& v, const std::string& q) { c.seed = get_seed(v, q); });
    });
    with(doc, "", "output_dir", [&](const json& v, const std::string& q) {
        if (v.is_null()) return;
        require(v.is_string(), "'" + q + "' must be a string");
        c.output_dir = v.get<std::string>();
    });
    return c;
}

RunConfig load_run_config(const fs::path& path) {
    const std::string text = read_text_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("malformed JSON in '" + path.string() + "': " + e.what());
    }
    return parse_run_config(doc);
}

json to_json(const RunConfig& c) {
    auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
    json pairs = json::array();
    for (const auto& [w1, w2] : c.omega_pairs) pairs.push_back({w1, w2});
    json doc;
    json annulus = json::object();
    if (c.r_inner) annulus["r_inner"] = *c.r_inner;
    if (c.r_outer) annulus["r_outer"] = *c.r_outer;
    doc["annulus"] = annulus;
    json flow = {{"omega_inner", c.omega_inner},
                 {"omega_outer", c.omega_outer},
                 {"axial_gradient", c.axial_gradient},
                 {"pressure_offset", c.pressure_offset}};
    if (c.viscosity) flow["viscosity"] = *c.viscosity;
    doc["flow"] = flow;
    doc["grid"] = {{"n_r", c.n_r}, {"n_z", c.n_z}, {"z_period", opt(c.z_period)}, {"n_theta", opt(c.n_theta)}};
    doc["solver"] = {{"newton_tol", c.newton_tol},
                     {"max_newton", c.max_newton},
                     {"ptc_initial_dt", opt(c.ptc_initial_dt)},
                     {"stokes_mode", c.stokes_mode},
                     {"exec", c.exec == Exec::serial ? "serial" : "parallel"}};
    doc["sweep"] = {{"omega_pairs", pairs}, {"amplitudes", c.amplitudes}, {"seeds", c.seeds}};
    doc["perturbation"] = {{"amplitude", c.amplitude}, {"seed", c.seed}};
    doc["output_dir"] = opt(c.output_dir);
    return doc;
}

fs::path resolve_output_dir(const std::optional<std::string>& flag, const RunConfig& config) {
    if (flag && !flag->empty()) return *flag;
    if (config.output_dir) return *config.output_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return "tcflow_out";
}

}  // namespace tcflow
