#include <cmath>
#include <sstream>

#include "doctest.h"
#include "temp_dir.hpp"
#include "tcflow/cli.hpp"
#include "tcflow/config.hpp"
#include "tcflow/io.hpp"

using namespace tcflow;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::size_t file_count(const fs::path& dir) {
    if (!fs::exists(dir)) return 0;
    return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}));
}

std::vector<std::string> geometry() { return {"--nu", "1", "--r1", "1", "--r2", "2"}; }

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

TEST_CASE("thresholds") {
    const Run r = cli(cat({"thresholds"}, geometry()));
    CHECK(r.code == exit_ok);
    CHECK(r.out.find("C_P      = 0.2026423672846") != std::string::npos);
    CHECK(r.out.find("C_1      = 1.110720734539") != std::string::npos);
    CHECK(r.out.find("C_2      = 0.7719021") != std::string::npos);
    CHECK(r.out.find("re_bound = 1.110720734539") != std::string::npos);

    const Run j = cli(cat({"thresholds", "--json"}, geometry()));
    const json doc = json::parse(j.out);
    CHECK(doc.at("c_star").get<double>() == doctest::Approx(0.77190215521208).epsilon(1e-12));
}

TEST_CASE("validation failures exit 1 without writing") {
    TempDir tmp;
    const std::string out = (tmp / "o").string();
    CHECK(cli({"thresholds", "--nu", "1", "--r1", "1"}).code == exit_validation);
    CHECK(cli({"exact", "--nu", "1", "--r1", "1", "--out", out}).code == exit_validation);
    CHECK(cli({"solve", "--r1", "1", "--r2", "2", "--out", out}).code == exit_validation);
    CHECK(cli({"sweep", "--nu", "1", "--r1", "1", "--r2", "2", "--lz", "4", "--out", out}).code ==
          exit_validation);
    CHECK(cli(cat({"sweep", "--omega-pairs", "0.3", "--amplitudes", "0.1", "--seeds", "1", "--lz", "4",
                   "--out", out},
                  geometry()))
              .code == exit_validation);
    CHECK(cli(cat({"exact", "--nr", "2", "--out", out}, geometry())).code == exit_validation);
    CHECK(cli(cat({"exact", "--bogus", "1", "--out", out}, geometry())).code == exit_validation);
    CHECK(cli(cat({"exact", "--nr", "abc", "--out", out}, geometry())).code == exit_validation);
    CHECK(cli({"residual", "--out", out}).code == exit_validation);
    CHECK(cli({"nonsense"}).code == exit_validation);
    CHECK(cli({}).code == exit_validation);
    CHECK(file_count(tmp / "o") == 0);

    const Run r = cli({"thresholds", "--r1", "1", "--r2", "2"});
    CHECK(r.err.find("viscosity") != std::string::npos);
    CHECK(cli({"--help"}).code == exit_ok);
}

TEST_CASE("config file with flag overrides") {
    TempDir tmp;
    write_text_file(tmp / "c.json", R"({"annulus": {"r_inner": 1, "r_outer": 2}, "flow": {"viscosity": 2}})");
    const Run from_file = cli({"thresholds", "--json", "--config", (tmp / "c.json").string()});
    CHECK(from_file.code == exit_ok);
    CHECK(json::parse(from_file.out).at("c1").get<double>() ==
          doctest::Approx(2.0 * 1.1107207345395915).epsilon(1e-14));
    const Run overridden = cli({"thresholds", "--json", "--config", (tmp / "c.json").string(), "--nu", "1"});
    CHECK(json::parse(overridden.out).at("c1").get<double>() ==
          doctest::Approx(1.1107207345395915).epsilon(1e-14));

    write_text_file(tmp / "typo.json", R"({"annulus": {"r_inner": 1, "r_outer": 2}, "flow": {"viscosty": 2}})");
    CHECK(cli({"thresholds", "--config", (tmp / "typo.json").string()}).code == exit_validation);
    CHECK(cli({"thresholds", "--config", (tmp / "absent.json").string()}).code == exit_io);
}

TEST_CASE("I/O failures exit 3") {
    TempDir tmp;
    CHECK(cli({"residual", "--in", (tmp / "nowhere").string()}).code == exit_io);
    write_text_file(tmp / "blocker", "x");
    CHECK(cli(cat({"exact", "--out", (tmp / "blocker" / "sub").string()}, geometry())).code == exit_io);
}

TEST_CASE("exact then residual converges at second order") {
    TempDir tmp;
    std::vector<double> errs;
    for (int n : {32, 64, 128}) {
        const std::string dir = (tmp / ("n" + std::to_string(n))).string();
        const std::string ns = std::to_string(n);
        REQUIRE(cli(cat({"exact", "--omega1", "0.3", "--omega2", "0.1", "--a", "0", "--nr", ns, "--nz", ns,
                         "--out", dir},
                        geometry()))
                    .code == exit_ok);
        const Run r = cli({"residual", "--in", dir, "--out", dir});
        REQUIRE(r.code == exit_ok);
        const json doc = json::parse(read_text_file(fs::path(dir) / "exact_residual.json"));
        errs.push_back(doc.at("report").at("max_linf").get<double>());
    }
    const double order = std::log2(errs[0] / errs[2]) / 2.0;
    CHECK(order >= 1.9);
}

TEST_CASE("solve writes outputs and reports non-convergence with exit 2") {
    TempDir tmp;
    const std::string dir = (tmp / "s").string();
    const auto base = cat({"solve", "--omega1", "0.3", "--omega2", "0.1", "--nr", "12", "--nz", "12",
                           "--amplitude", "0.1", "--seed", "4", "--out", dir},
                          geometry());
    const Run ok = cli(base);
    CHECK(ok.code == exit_ok);
    const json summary = json::parse(read_text_file(fs::path(dir) / "solution_summary.json"));
    CHECK(summary.at("converged") == true);
    CHECK(summary.at("config").at("perturbation").at("seed") == 4);
    CHECK(fs::exists(fs::path(dir) / "solution_history.csv"));

    const Run stuck = cli(cat(base, {"--max-newton", "1", "--stem", "stuck"}));
    CHECK(stuck.code == exit_nonconvergence);
    CHECK(fs::exists(fs::path(dir) / "stuck_summary.json"));
}

TEST_CASE("energy on stored snapshots and inputs left untouched") {
    TempDir tmp;
    const std::string dir = (tmp / "e").string();
    REQUIRE(cli(cat({"exact", "--omega1", "0.3", "--lz", "4", "--nr", "8", "--nz", "16", "--out", dir},
                    geometry()))
                .code == exit_ok);
    const std::string before = read_text_file(fs::path(dir) / "exact_v_z.csv") +
                               read_text_file(fs::path(dir) / "exact_meta.json");
    const Run r = cli({"energy", "--in", dir, "--out", (tmp / "res").string()});
    CHECK(r.code == exit_ok);
    CHECK(r.out.find("L = 2  Y = 0") != std::string::npos);
    CHECK(fs::exists(tmp / "res" / "exact_energy_axial.csv"));
    CHECK(cli({"residual", "--in", dir, "--out", dir}).code == exit_ok);
    const std::string after = read_text_file(fs::path(dir) / "exact_v_z.csv") +
                              read_text_file(fs::path(dir) / "exact_meta.json");
    CHECK(before == after);

    CHECK(cli({"energy", "--in", dir, "--variant", "azimuthal"}).code == exit_validation);
    CHECK(cli({"energy", "--in", dir, "--variant", "radial"}).code == exit_validation);
}

TEST_CASE("poincare suite") {
    TempDir tmp;
    const Run r = cli({"poincare", "--r1", "1", "--r2", "2", "--lz", "4", "--count", "10", "--out",
                       tmp.path().string()});
    CHECK(r.code == exit_ok);
    const json s = json::parse(read_text_file(tmp / "poincare_summary.json"));
    CHECK(s.at("violations") == 0);
    CHECK(s.at("cases") == 11);
    CHECK(s.at("fundamental_ratio").get<double>() < s.at("sqrt_cp").get<double>());
}

TEST_CASE("sweep output is byte-identical across repeats and honours the environment") {
    TempDir tmp;
    const auto args = cat({"sweep", "--lz", "4", "--nr", "12", "--nz", "12", "--omega-pairs", "0.3:0.1,0:0",
                           "--amplitudes", "0.1", "--seeds", "1,2"},
                          geometry());
    ::setenv(kOutputDirEnv, (tmp / "a").string().c_str(), 1);
    CHECK(cli(args).code == exit_ok);
    ::setenv(kOutputDirEnv, (tmp / "b").string().c_str(), 1);
    CHECK(cli(args).code == exit_ok);
    ::unsetenv(kOutputDirEnv);
    for (const char* name : {"sweep.csv", "sweep_summary.json"})
        CHECK(read_text_file(tmp / "a" / name) == read_text_file(tmp / "b" / name));
    std::istringstream in(read_text_file(tmp / "a" / "sweep.csv"));
    const auto records = read_records_csv(in);
    REQUIRE(records.size() == 4);
    for (const auto& rec : records) CHECK(rec.on_manifold);
}
