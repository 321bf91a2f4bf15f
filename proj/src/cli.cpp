#include "tcflow/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "tcflow/config.hpp"
#include "tcflow/errors.hpp"
#include "tcflow/exact_flows.hpp"
#include "tcflow/io.hpp"
#include "tcflow/lab.hpp"
#include "tcflow/operators.hpp"
#include "tcflow/solver.hpp"

namespace tcflow {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Every flag any subcommand accepts; only the parsed subcommand fills it.
struct Options {
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<double> r1, r2, nu, omega1, omega2, a, b, lz, tol, ptc_dt, amplitude, l_cut;
    std::optional<int> nr, nz, ntheta, max_newton;
    std::optional<std::uint64_t> seed;
    bool stokes = false;
    bool serial = false;
    bool json_output = false;
    std::vector<std::string> omega_pairs;
    std::vector<double> amplitudes;
    std::vector<std::uint64_t> seeds;
    std::string in_dir;
    std::string stem;
    std::string variant = "axial";
    int count = 50;
};

void add_common(CLI::App* s, Options& o) {
    s->add_option("--config", o.config, "JSON run configuration");
    s->add_option("--out", o.out, std::string("Output directory (default: config, $") + kOutputDirEnv +
                                      ", then ./tcflow_out)");
}

void add_geometry(CLI::App* s, Options& o) {
    s->add_option("--r1", o.r1, "Inner radius R1");
    s->add_option("--r2", o.r2, "Outer radius R2");
    s->add_option("--nu", o.nu, "Kinematic viscosity");
}

void add_flow(CLI::App* s, Options& o) {
    s->add_option("--omega1", o.omega1, "Inner wall angular velocity");
    s->add_option("--omega2", o.omega2, "Outer wall angular velocity");
    s->add_option("--a", o.a, "Imposed axial pressure gradient");
}

void add_grid(CLI::App* s, Options& o, bool theta) {
    s->add_option("--nr", o.nr, "Radial cells");
    s->add_option("--nz", o.nz, "Axial cells");
    s->add_option("--lz", o.lz, "Axial period (default 2 (R2 - R1))");
    if (theta) s->add_option("--ntheta", o.ntheta, "Azimuthal slices (theta-resolved output)");
}

void add_solver(CLI::App* s, Options& o) {
    s->add_option("--tol", o.tol, "Newton tolerance on the residual max-norm");
    s->add_option("--max-newton", o.max_newton, "Maximum nonlinear iterations");
    s->add_option("--ptc-dt", o.ptc_dt, "Initial pseudo-time step");
    s->add_flag("--stokes", o.stokes, "Drop the advection terms");
    s->add_flag("--serial", o.serial, "Use the serial reference kernels");
}

std::pair<double, double> parse_pair(const std::string& text) {
    const auto colon = text.find(':');
    require(colon != std::string::npos, "omega pair '" + text + "' must look like w1:w2");
    return {parse_double(text.substr(0, colon)), parse_double(text.substr(colon + 1))};
}

RunConfig build_config(const Options& o) {
    RunConfig c = o.config ? load_run_config(*o.config) : RunConfig{};
    if (o.r1) c.r_inner = o.r1;
    if (o.r2) c.r_outer = o.r2;
    if (o.nu) c.viscosity = o.nu;
    if (o.omega1) c.omega_inner = *o.omega1;
    if (o.omega2) c.omega_outer = *o.omega2;
    if (o.a) c.axial_gradient = *o.a;
    if (o.b) c.pressure_offset = *o.b;
    if (o.nr) c.n_r = *o.nr;
    if (o.nz) c.n_z = *o.nz;
    if (o.lz) c.z_period = o.lz;
    if (o.ntheta) c.n_theta = o.ntheta;
    if (o.tol) c.newton_tol = *o.tol;
    if (o.max_newton) c.max_newton = *o.max_newton;
    if (o.ptc_dt) c.ptc_initial_dt = o.ptc_dt;
    if (o.stokes) c.stokes_mode = true;
    if (o.serial) c.exec = Exec::serial;
    if (o.amplitude) c.amplitude = *o.amplitude;
    if (o.seed) c.seed = *o.seed;
    if (!o.omega_pairs.empty()) {
        c.omega_pairs.clear();
        for (const auto& p : o.omega_pairs) c.omega_pairs.push_back(parse_pair(p));
    }
    if (!o.amplitudes.empty()) c.amplitudes = o.amplitudes;
    if (!o.seeds.empty()) c.seeds = o.seeds;
    if (o.out) c.output_dir = o.out;
    return c;
}

void write_json(const fs::path& path, const json& doc) { write_text_file(path, doc.dump(2) + "\n"); }

template <class Writer>
void write_stream(const fs::path& path, Writer&& writer) {
    std::ostringstream ss;
    writer(ss);
    write_text_file(path, ss.str());
}

int cmd_thresholds(const Options& o, std::ostream& out) {
    const RunConfig c = build_config(o);
    c.validate();
    const Thresholds t = thresholds(*c.viscosity, c.annulus());
    if (o.json_output) {
        out << to_json(t).dump(2) << "\n";
        return exit_ok;
    }
    out << "C_P      = " << format_double(t.c_p) << "\n"
        << "C_1      = " << format_double(t.c1) << "\n"
        << "C_2      = " << format_double(t.c2) << "\n"
        << "C_star   = " << format_double(t.c_star) << "\n"
        << "re_bound = " << format_double(t.re_bound) << "\n";
    return exit_ok;
}

int cmd_exact(const Options& o, std::ostream& out) {
    const RunConfig c = build_config(o);
    c.validate();
    const GeneralizedTC gtc =
        make_generalized_tc(c.annulus(), c.flow(), c.axial_gradient, c.pressure_offset);
    const auto [field, pressure] = sample_on_grid(gtc, c.grid());
    const fs::path dir = resolve_output_dir(o.out, c);
    write_snapshot(dir, o.stem, field, &pressure, *c.viscosity, "closed_form", to_json(c));
    out << "A = " << format_double(gtc.coeffs.a_coef) << "\n"
        << "B = " << format_double(gtc.coeffs.b_coef) << "\n"
        << "snapshot " << (dir / o.stem).string() << "\n";
    return exit_ok;
}

int cmd_residual(const Options& o, std::ostream& out) {
    const RunConfig c = o.config ? load_run_config(*o.config) : RunConfig{};
    if (o.nu) require(*o.nu > 0.0, "viscosity must be positive");
    const Snapshot snap = read_snapshot(o.in_dir, o.stem);
    require(snap.pressure.has_value(), "snapshot has no pressure component");
    const double nu = o.nu.value_or(snap.viscosity);
    bool stokes = o.stokes;
    if (const auto cfg = snap.meta.find("config"); cfg != snap.meta.end() && cfg->contains("solver"))
        stokes = stokes || cfg->at("solver").value("stokes_mode", false);
    const Exec exec = o.serial ? Exec::serial : Exec::parallel;
    const PressureField& p = *snap.pressure;
    ResidualReport report;
    if (snap.field.grid().axisymmetric()) {
        report = summarize(snap.field.grid(),
                           residual_fields_axisym(snap.field, p, p.axial_gradient, nu, !stokes, exec), exec);
    } else {
        require(!stokes, "Stokes residuals are only available on axisymmetric snapshots");
        report = momentum_residual_general(snap.field, p, nu, exec);
    }
    json doc{{"input", {{"dir", o.in_dir}, {"stem", o.stem}}},
             {"viscosity", nu},
             {"stokes_mode", stokes},
             {"report", to_json(report)},
             {"snapshot_config", snap.meta.value("config", json::object())}};
    const fs::path dir = resolve_output_dir(o.out, c);
    ensure_directory(dir);
    write_json(dir / (o.stem + "_residual.json"), doc);
    out << doc["report"].dump(2) << "\n";
    return exit_ok;
}

int cmd_solve(const Options& o, std::ostream& out) {
    const RunConfig c = build_config(o);
    c.validate();
    require(!c.n_theta, "solve works on axisymmetric grids; drop --ntheta");
    const Grid g = c.grid();
    const FlowConfig bc = c.flow();
    const double nu = *c.viscosity;
    const GeneralizedTC gtc = make_generalized_tc(c.annulus(), bc, c.axial_gradient, c.pressure_offset);
    const Field reference = sample_on_grid(gtc, g).first;
    const Field start = perturb(reference, c.amplitude, c.seed);
    const SolveOutcome res = solve_steady(g, nu, bc, start, c.solve_options());

    const ManifoldFit fit = fit_tc_manifold(res.field, res.pressure, std::nullopt, nu);
    const auto [ref_linf, ref_l2] = field_distance(res.field, reference);
    json summary{{"config", to_json(c)},
                 {"status", to_string(res.status)},
                 {"converged", res.converged},
                 {"newton_iterations", res.newton_iterations},
                 {"residual", to_json(res.final_residual)},
                 {"velocity_linf", res.field.max_abs()},
                 {"thresholds", to_json(thresholds(nu, c.annulus()))},
                 {"closed_form_distance", {{"linf", ref_linf}, {"l2", ref_l2}}},
                 {"fit",
                  {{"a_coef", fit.fitted.coeffs.a_coef},
                   {"b_coef", fit.fitted.coeffs.b_coef},
                   {"axial_gradient", fit.fitted.axial_gradient},
                   {"pressure_offset", fit.fitted.pressure_offset},
                   {"distance_linf", fit.distance_linf},
                   {"distance_l2", fit.distance_l2}}}};

    const fs::path dir = resolve_output_dir(o.out, c);
    write_snapshot(dir, o.stem, res.field, &res.pressure, nu, "zero_weighted_mean", to_json(c));
    write_stream(dir / (o.stem + "_history.csv"),
                 [&](std::ostream& s) { write_history_csv(s, res.history); });
    write_json(dir / (o.stem + "_summary.json"), summary);

    out << "status " << to_string(res.status) << " after " << res.newton_iterations
        << " iterations, residual " << format_double(res.final_residual.max_linf()) << "\n"
        << "distance to closed form " << format_double(ref_linf) << "\n"
        << "output " << dir.string() << "\n";
    return res.converged ? exit_ok : exit_nonconvergence;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    const RunConfig c = build_config(o);
    c.validate();
    require(!c.n_theta, "sweeps run on axisymmetric grids; drop --ntheta");
    const SweepConfig sc = c.sweep_config();
    sc.validate();
    const auto records = sweep_reynolds(sc);
    const SweepSummary s = summarize_sweep(records);

    json summary{{"config", to_json(c)},
                 {"thresholds", to_json(thresholds(sc.viscosity, sc.annulus))},
                 {"l_ladder", l_ladder(sc.z_period)},
                 {"summary", to_json(s)}};
    const fs::path dir = resolve_output_dir(o.out, c);
    ensure_directory(dir);
    write_stream(dir / "sweep.csv", [&](std::ostream& os) { write_records_csv(os, records); });
    write_json(dir / "sweep_summary.json", summary);

    out << "runs " << s.runs << ", converged " << s.converged << ", on manifold " << s.on_manifold
        << ", out of hypothesis " << s.out_of_hypothesis << ", counterexamples " << s.counterexamples
        << "\n"
        << "output " << dir.string() << "\n";
    return s.converged == s.runs ? exit_ok : exit_nonconvergence;
}

int cmd_poincare(const Options& o, std::ostream& out) {
    const RunConfig c = build_config(o);
    c.validate(false);
    require(!c.n_theta, "the Poincare check uses axisymmetric profiles; drop --ntheta");
    require(o.count >= 0, "--count must be non-negative");
    const Grid g = c.grid();
    const double l_cut = o.l_cut.value_or(std::max(1.25, 0.5 * g.z_period()));
    const auto cases = poincare_suite(g, l_cut, o.count, c.seed);

    int violations = 0;
    std::ostringstream csv;
    csv << "case,l_cut,ratio_omega,ratio_strip,sqrt_cp,bound,degenerate_omega,degenerate_strip,holds\n";
    for (const auto& pc : cases) {
        const auto& r = pc.report;
        if (!r.holds) ++violations;
        csv << pc.name << ',' << format_double(l_cut) << ',' << format_double(r.ratio_omega) << ','
            << format_double(r.ratio_strip) << ',' << format_double(r.sqrt_cp) << ','
            << format_double(r.bound) << ',' << (r.degenerate_omega ? 1 : 0) << ','
            << (r.degenerate_strip ? 1 : 0) << ',' << (r.holds ? 1 : 0) << '\n';
    }
    const auto& fundamental = cases.front().report;
    json summary{{"config", to_json(c)},
                 {"l_cut", l_cut},
                 {"cases", cases.size()},
                 {"violations", violations},
                 {"sqrt_cp", fundamental.sqrt_cp},
                 {"fundamental_ratio", fundamental.ratio_omega}};
    const fs::path dir = resolve_output_dir(o.out, c);
    ensure_directory(dir);
    write_text_file(dir / "poincare.csv", csv.str());
    write_json(dir / "poincare_summary.json", summary);

    out << "fundamental ratio " << format_double(fundamental.ratio_omega) << ", sqrt(C_P) "
        << format_double(fundamental.sqrt_cp) << "\n"
        << cases.size() << " cases, " << violations << " violations\n";
    return exit_ok;
}

int cmd_energy(const Options& o, std::ostream& out) {
    const RunConfig c = o.config ? load_run_config(*o.config) : RunConfig{};
    const EnergyVariant variant = parse_energy_variant(o.variant);
    if (o.nu) require(*o.nu > 0.0, "viscosity must be positive");
    const Snapshot snap = read_snapshot(o.in_dir, o.stem);
    const double nu = o.nu.value_or(snap.viscosity);
    std::vector<EnergyReport> ladder;
    if (o.l_cut) {
        ladder.push_back(y_functional(snap.field, nu, CutoffSpec{*o.l_cut}, variant));
    } else {
        ladder = y_ladder(snap.field, nu, variant);
        require(!ladder.empty(), "axial period below 2.5 leaves the L ladder empty; pass --L");
    }
    json reports = json::array();
    for (const auto& r : ladder) reports.push_back(to_json(r));
    json doc{{"input", {{"dir", o.in_dir}, {"stem", o.stem}}},
             {"viscosity", nu},
             {"variant", to_string(variant)},
             {"ladder", reports},
             {"snapshot_config", snap.meta.value("config", json::object())}};
    const fs::path dir = resolve_output_dir(o.out, c);
    ensure_directory(dir);
    const std::string base = o.stem + "_energy_" + to_string(variant);
    write_stream(dir / (base + ".csv"), [&](std::ostream& s) { write_energy_csv(s, ladder); });
    write_json(dir / (base + ".json"), doc);

    for (const auto& r : ladder)
        out << "L = " << format_double(r.l_cut) << "  Y = " << format_double(r.y_value)
            << "  Y' = " << format_double(r.y_prime) << "\n";
    return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Taylor-Couette thresholds, steady solves and Liouville experiments", "tcflow"};
    app.require_subcommand(1);
    Options o;

    auto* th = app.add_subcommand("thresholds", "Print C_P, C_1, C_2, C_star and the Reynolds bound");
    add_common(th, o);
    add_geometry(th, o);
    th->add_flag("--json", o.json_output, "Print JSON instead of text");

    auto* ex = app.add_subcommand("exact", "Write a sampled generalized Taylor-Couette snapshot");
    add_common(ex, o);
    add_geometry(ex, o);
    add_flow(ex, o);
    ex->add_option("--b", o.b, "Pressure offset");
    add_grid(ex, o, true);
    ex->add_option("--stem", o.stem, "Snapshot name (default exact)");

    auto* re = app.add_subcommand("residual", "Discrete residual norms of a stored snapshot");
    add_common(re, o);
    re->add_option("--in", o.in_dir, "Snapshot directory")->required();
    re->add_option("--stem", o.stem, "Snapshot name (default exact)");
    re->add_option("--nu", o.nu, "Viscosity (default: from the snapshot)");
    re->add_flag("--stokes", o.stokes, "Evaluate without advection");
    re->add_flag("--serial", o.serial, "Use the serial reference kernels");

    auto* so = app.add_subcommand("solve", "Steady Newton solve from a perturbed closed-form start");
    add_common(so, o);
    add_geometry(so, o);
    add_flow(so, o);
    so->add_option("--b", o.b, "Pressure offset of the closed-form reference");
    add_grid(so, o, false);
    add_solver(so, o);
    so->add_option("--amplitude", o.amplitude, "Perturbation amplitude");
    so->add_option("--seed", o.seed, "Perturbation seed");
    so->add_option("--stem", o.stem, "Output name (default solution)");

    auto* sw = app.add_subcommand("sweep", "Reynolds sweep over omega pairs, amplitudes and seeds");
    add_common(sw, o);
    add_geometry(sw, o);
    sw->add_option("--a", o.a, "Imposed axial pressure gradient");
    add_grid(sw, o, false);
    add_solver(sw, o);
    sw->add_option("--omega-pairs", o.omega_pairs, "Pairs w1:w2")->delimiter(',');
    sw->add_option("--amplitudes", o.amplitudes, "Perturbation amplitudes")->delimiter(',');
    sw->add_option("--seeds", o.seeds, "Perturbation seeds")->delimiter(',');

    auto* po = app.add_subcommand("poincare", "Weighted radial Poincare checks");
    add_common(po, o);
    po->add_option("--r1", o.r1, "Inner radius R1");
    po->add_option("--r2", o.r2, "Outer radius R2");
    add_grid(po, o, false);
    po->add_option("--L", o.l_cut, "Cutoff length (default max(1.25, z_period / 2))");
    po->add_option("--count", o.count, "Random profiles (default 50)");
    po->add_option("--seed", o.seed, "Random seed");

    auto* en = app.add_subcommand("energy", "Y(L) ladder of a stored snapshot");
    add_common(en, o);
    en->add_option("--in", o.in_dir, "Snapshot directory")->required();
    en->add_option("--stem", o.stem, "Snapshot name (default exact)");
    en->add_option("--variant", o.variant, "axial or azimuthal (default axial)");
    en->add_option("--nu", o.nu, "Viscosity (default: from the snapshot)");
    en->add_option("--L", o.l_cut, "Single cutoff length instead of the ladder");

    std::vector<std::string> argv_store{"tcflow"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_validation;
    }

    if (o.stem.empty()) o.stem = so->parsed() ? "solution" : "exact";

    try {
        if (th->parsed()) return cmd_thresholds(o, out);
        if (ex->parsed()) return cmd_exact(o, out);
        if (re->parsed()) return cmd_residual(o, out);
        if (so->parsed()) return cmd_solve(o, out);
        if (sw->parsed()) return cmd_sweep(o, out);
        if (po->parsed()) return cmd_poincare(o, out);
        if (en->parsed()) return cmd_energy(o, out);
    } catch (const ValidationError& e) {
        err << "tcflow: invalid input: " << e.what() << "\n";
        return exit_validation;
    } catch (const IoError& e) {
        err << "tcflow: I/O error: " << e.what() << "\n";
        return exit_io;
    } catch (const fs::filesystem_error& e) {
        err << "tcflow: I/O error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::exception& e) {
        err << "tcflow: error: " << e.what() << "\n";
        return exit_validation;
    }
    return exit_validation;
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace tcflow
