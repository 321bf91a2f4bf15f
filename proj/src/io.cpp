#include "tcflow/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "tcflow/errors.hpp"

namespace tcflow {
namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& token) {
    require(!token.empty(), "empty numeric field");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    require(end == token.c_str() + token.size(), "malformed numeric field '" + token + "'");
    // ERANGE also flags subnormals, which round-trip fine; only overflow is fatal.
    require(!(errno == ERANGE && std::isinf(v)), "numeric field '" + token + "' overflows");
    return v;
}

namespace {

long parse_int(const std::string& token) {
    require(!token.empty(), "empty integer field");
    char* end = nullptr;
    const long v = std::strtol(token.c_str(), &end, 10);
    require(end == token.c_str() + token.size(), "malformed integer field '" + token + "'");
    return v;
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t n = 0; n < items.size(); ++n) {
        if (n) out += ',';
        out += items[n];
    }
    return out;
}

}  // namespace

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
    return ss.str();
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

namespace {

enum class Stagger { radial_face, centre, axial_face };

// Writes one component. get(k, i, j) returns the stored value.
std::string component_csv(const Grid& g, Stagger where,
                          const std::function<double(int, int, int)>& get) {
    const bool theta = !g.axisymmetric();
    std::string out = theta ? "i,j,k,r,z,theta,value\n" : "i,j,r,z,value\n";
    const int ni = where == Stagger::radial_face ? g.n_r() + 1 : g.n_r();
    for (int k = 0; k < g.n_theta(); ++k)
        for (int i = 0; i < ni; ++i)
            for (int j = 0; j < g.n_z(); ++j) {
                const double r = where == Stagger::radial_face ? g.r_face(i) : g.r_center(i);
                const double z = where == Stagger::axial_face ? g.z_face(j) : g.z_center(j);
                std::vector<std::string> row{std::to_string(i), std::to_string(j)};
                if (theta) row.push_back(std::to_string(k));
                row.push_back(format_double(r));
                row.push_back(format_double(z));
                if (theta) row.push_back(format_double(g.theta(k)));
                row.push_back(format_double(get(k, i, j)));
                out += join(row);
                out += '\n';
            }
    return out;
}

void read_component(const fs::path& path, const Grid& g, Stagger where,
                    const std::function<void(int, int, int, double)>& set) {
    std::istringstream in(read_text_file(path));
    const bool theta = !g.axisymmetric();
    std::string line;
    std::getline(in, line);
    const std::string header = theta ? "i,j,k,r,z,theta,value" : "i,j,r,z,value";
    require(line == header, "unexpected header in '" + path.string() + "'");
    const int ni = where == Stagger::radial_face ? g.n_r() + 1 : g.n_r();
    const std::size_t expected = static_cast<std::size_t>(g.n_theta()) * ni * g.n_z();
    std::size_t count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        require(f.size() == (theta ? 7u : 5u), "wrong column count in '" + path.string() + "'");
        const long i = parse_int(f[0]);
        const long j = parse_int(f[1]);
        const long k = theta ? parse_int(f[2]) : 0;
        require(i >= 0 && i < ni && j >= 0 && j < g.n_z() && k >= 0 && k < g.n_theta(),
                "index out of range in '" + path.string() + "'");
        set(static_cast<int>(k), static_cast<int>(i), static_cast<int>(j), parse_double(f.back()));
        ++count;
    }
    require(count == expected, "wrong row count in '" + path.string() + "'");
}

fs::path component_path(const fs::path& dir, const std::string& stem, const std::string& name) {
    return dir / (stem + "_" + name + ".csv");
}

}  // namespace

void write_snapshot(const fs::path& dir, const std::string& stem, const Field& field,
                    const PressureField* pressure, double viscosity, const std::string& gauge,
                    const json& extra) {
    const Grid& g = field.grid();
    if (pressure) require(pressure->grid().same_layout(g), "pressure and velocity grids differ");
    ensure_directory(dir);
    write_text_file(component_path(dir, stem, "v_r"),
                    component_csv(g, Stagger::radial_face, [&](int k, int i, int j) { return field.v_r(k, i, j); }));
    write_text_file(component_path(dir, stem, "v_theta"),
                    component_csv(g, Stagger::centre, [&](int k, int i, int j) { return field.v_theta(k, i, j); }));
    write_text_file(component_path(dir, stem, "v_z"),
                    component_csv(g, Stagger::axial_face, [&](int k, int i, int j) { return field.v_z(k, i, j); }));
    if (pressure)
        write_text_file(component_path(dir, stem, "p"),
                        component_csv(g, Stagger::centre, [&](int k, int i, int j) { return (*pressure)(k, i, j); }));

    json meta;
    meta["format"] = "tcflow-snapshot-1";
    meta["grid"] = {{"r_inner", g.annulus().r_inner()},
                    {"r_outer", g.annulus().r_outer()},
                    {"n_r", g.n_r()},
                    {"n_z", g.n_z()},
                    {"z_period", g.z_period()},
                    {"n_theta", g.axisymmetric() ? json(nullptr) : json(g.n_theta())}};
    meta["viscosity"] = viscosity;
    meta["wall_vtheta_inner"] = field.wall_vtheta_inner;
    meta["wall_vtheta_outer"] = field.wall_vtheta_outer;
    meta["has_pressure"] = pressure != nullptr;
    meta["axial_gradient"] = pressure ? pressure->axial_gradient : 0.0;
    meta["gauge"] = gauge;
    meta["config"] = extra;
    write_text_file(dir / (stem + "_meta.json"), meta.dump(2) + "\n");
}

Snapshot read_snapshot(const fs::path& dir, const std::string& stem) {
    json meta;
    try {
        meta = json::parse(read_text_file(dir / (stem + "_meta.json")));
    } catch (const json::exception& e) {
        throw ValidationError("malformed snapshot metadata: " + std::string(e.what()));
    }
    try {
        require(meta.at("format") == "tcflow-snapshot-1", "unsupported snapshot format");
        const json& gm = meta.at("grid");
        const Annulus an(gm.at("r_inner").get<double>(), gm.at("r_outer").get<double>());
        std::optional<int> nt;
        if (!gm.at("n_theta").is_null()) nt = gm.at("n_theta").get<int>();
        const Grid g(an, gm.at("n_r").get<int>(), gm.at("n_z").get<int>(),
                     gm.at("z_period").get<double>(), nt);
        Snapshot snap{Field(g), std::nullopt, meta.at("viscosity").get<double>(), meta};
        snap.field.wall_vtheta_inner = meta.at("wall_vtheta_inner").get<double>();
        snap.field.wall_vtheta_outer = meta.at("wall_vtheta_outer").get<double>();
        Field& f = snap.field;
        read_component(component_path(dir, stem, "v_r"), g, Stagger::radial_face,
                       [&](int k, int i, int j, double v) { f.v_r(k, i, j) = v; });
        read_component(component_path(dir, stem, "v_theta"), g, Stagger::centre,
                       [&](int k, int i, int j, double v) { f.v_theta(k, i, j) = v; });
        read_component(component_path(dir, stem, "v_z"), g, Stagger::axial_face,
                       [&](int k, int i, int j, double v) { f.v_z(k, i, j) = v; });
        if (meta.at("has_pressure").get<bool>()) {
            PressureField p(g);
            p.axial_gradient = meta.at("axial_gradient").get<double>();
            read_component(component_path(dir, stem, "p"), g, Stagger::centre,
                           [&](int k, int i, int j, double v) { p(k, i, j) = v; });
            snap.pressure = std::move(p);
        }
        return snap;
    } catch (const json::exception& e) {
        throw ValidationError("malformed snapshot metadata: " + std::string(e.what()));
    }
}

json to_json(const ResidualReport& r) {
    auto norms = [](const EquationNorms& n) { return json{{"linf", n.linf}, {"l2", n.l2}}; };
    return json{{"radial", norms(r.radial)},
                {"azimuthal", norms(r.azimuthal)},
                {"axial", norms(r.axial)},
                {"continuity", norms(r.continuity)},
                {"h_r", r.h_r},
                {"h_z", r.h_z},
                {"max_linf", r.max_linf()}};
}

json to_json(const EnergyReport& r) {
    json terms = json::array();
    for (const auto& t : r.terms) terms.push_back({{"name", t.name}, {"y", t.y}, {"y_prime", t.y_prime}});
    return json{{"l_cut", r.l_cut}, {"y", r.y_value}, {"y_prime", r.y_prime}, {"terms", terms}};
}

json to_json(const SweepSummary& s) {
    return json{{"runs", s.runs},
                {"converged", s.converged},
                {"on_manifold", s.on_manifold},
                {"out_of_hypothesis", s.out_of_hypothesis},
                {"counterexamples", s.counterexamples}};
}

json to_json(const Thresholds& t) {
    return json{{"c_p", t.c_p}, {"c1", t.c1}, {"c2", t.c2}, {"c_star", t.c_star}, {"re_bound", t.re_bound}};
}

namespace {

const std::vector<std::string> kRecordColumns{
    "omega_inner", "omega_outer", "reynolds_inner", "reynolds_outer", "amplitude", "seed",
    "converged", "status", "newton_iterations", "final_residual", "velocity_linf", "c_p", "c1",
    "c2", "c_star", "re_bound", "wall_hypothesis", "reynolds_hypothesis", "in_hypothesis",
    "fitted_a_coef", "fitted_b_coef", "fitted_axial_gradient", "manifold_distance",
    "manifold_distance_l2", "distance_tolerance", "on_manifold", "y_max", "y_prime_max", "y_scale"};

std::string flag(bool b) { return b ? "1" : "0"; }

bool parse_flag(const std::string& s) {
    require(s == "0" || s == "1", "malformed boolean field '" + s + "'");
    return s == "1";
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
    out << join(kRecordColumns) << '\n';
    for (const auto& r : records) {
        const std::vector<std::string> row{
            format_double(r.omega_inner), format_double(r.omega_outer),
            format_double(r.reynolds_inner), format_double(r.reynolds_outer),
            format_double(r.amplitude), std::to_string(r.seed), flag(r.converged), r.status,
            std::to_string(r.newton_iterations), format_double(r.final_residual),
            format_double(r.velocity_linf), format_double(r.thresholds.c_p),
            format_double(r.thresholds.c1), format_double(r.thresholds.c2),
            format_double(r.thresholds.c_star), format_double(r.thresholds.re_bound),
            flag(r.wall_hypothesis), flag(r.reynolds_hypothesis), flag(r.in_hypothesis),
            format_double(r.fitted_a_coef), format_double(r.fitted_b_coef),
            format_double(r.fitted_axial_gradient), format_double(r.manifold_distance),
            format_double(r.manifold_distance_l2), format_double(r.distance_tolerance),
            flag(r.on_manifold), format_double(r.y_max), format_double(r.y_prime_max),
            format_double(r.y_scale)};
        out << join(row) << '\n';
    }
}

std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "empty record table");
    require(line == join(kRecordColumns), "unexpected record table header");
    std::vector<ExperimentRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        require(f.size() == kRecordColumns.size(), "wrong column count in record table");
        ExperimentRecord r;
        std::size_t c = 0;
        auto d = [&]() { return parse_double(f[c++]); };
        r.omega_inner = d();
        r.omega_outer = d();
        r.reynolds_inner = d();
        r.reynolds_outer = d();
        r.amplitude = d();
        r.seed = std::stoull(f[c++]);
        r.converged = parse_flag(f[c++]);
        r.status = f[c++];
        r.newton_iterations = static_cast<int>(parse_int(f[c++]));
        r.final_residual = d();
        r.velocity_linf = d();
        r.thresholds.c_p = d();
        r.thresholds.c1 = d();
        r.thresholds.c2 = d();
        r.thresholds.c_star = d();
        r.thresholds.re_bound = d();
        r.wall_hypothesis = parse_flag(f[c++]);
        r.reynolds_hypothesis = parse_flag(f[c++]);
        r.in_hypothesis = parse_flag(f[c++]);
        r.fitted_a_coef = d();
        r.fitted_b_coef = d();
        r.fitted_axial_gradient = d();
        r.manifold_distance = d();
        r.manifold_distance_l2 = d();
        r.distance_tolerance = d();
        r.on_manifold = parse_flag(f[c++]);
        r.y_max = d();
        r.y_prime_max = d();
        r.y_scale = d();
        out.push_back(r);
    }
    return out;
}

void write_energy_csv(std::ostream& out, const std::vector<EnergyReport>& ladder) {
    std::vector<std::string> header{"l_cut", "y", "y_prime"};
    if (!ladder.empty())
        for (const auto& t : ladder.front().terms) header.push_back(t.name);
    out << join(header) << '\n';
    for (const auto& rep : ladder) {
        std::vector<std::string> row{format_double(rep.l_cut), format_double(rep.y_value),
                                     format_double(rep.y_prime)};
        for (const auto& t : rep.terms) row.push_back(format_double(t.y));
        out << join(row) << '\n';
    }
}

}  // namespace tcflow
