#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gou/cli.hpp"
#include "gou/config.hpp"
#include "gou/manifest.hpp"
#include "gou/svg.hpp"
#include "test_helpers.hpp"

using namespace gou;

namespace {

const char* kMinimalBrownian = R"(
# minimal reference configuration
[model]
variant = brownian_drift
gamma_xi = 1.0
gamma_eta = -0.05
cov_xx = 2.0
cov_xy = 0.0
cov_yy = 0.0025

[simulation]
seed = 42
)";

std::string footnote_config(int n_paths) {
    std::ostringstream o;
    o << "[model]\n"
         "variant = cp_gaussian\n"
         "gamma_xi = 1\ngamma_eta = -1\nlambda = 1\n"
         "mean_x = 1\nmean_y = 0\ncov_xx = 1e-12\ncov_xy = 0\ncov_yy = 1e-12\n"
         "[simulation]\nseed = 7\nn_paths = "
      << n_paths
      << "\ntheta = 20\nt_max = 40\n"
         "[analysis]\nz_grid = 0.5,2\n";
    return o.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double value_of(const std::string& text, const std::string& key) {
    const auto pos = text.find(key + " = ");
    REQUIRE(pos != std::string::npos);
    return std::strtod(text.c_str() + pos + key.size() + 3, nullptr);
}

} // namespace

TEST_CASE("minimal config gets the documented defaults") {
    const RunConfig cfg = parse_config(kMinimalBrownian);
    CHECK(cfg.sim.seed == 42);
    CHECK(cfg.sim.h == 1.0 / 256.0);
    CHECK(cfg.sim.theta == 30.0);
    CHECK(cfg.sim.t_max == 200.0);
    CHECK(cfg.sim.n_paths == 10000);
    CHECK(cfg.output.dir == "out");
    CHECK(cfg.verify.slope_rel_tol == 0.2);
    CHECK(std::holds_alternative<BrownianDriftParams>(cfg.model));
}

TEST_CASE("render/parse round trip is the identity") {
    RunConfig cfg = parse_config(kMinimalBrownian);
    cfg.analysis.z_grid = {5, 10, 20, 40, 80};
    cfg.analysis.x_grid = {0.5, 0.75, 1.0};
    cfg.analysis.alpha_grid = {0.1, 0.3333333333333333, 0.77};
    cfg.analysis.ldp_z = 40;
    cfg.sim.has_v0 = true;
    cfg.sim.v0 = 2.5;
    cfg.sim.h = 0.0078125;
    cfg.output.dump_paths = true;
    const RunConfig back = parse_config(render_config(cfg));
    CHECK(back == cfg);

    // a second family for the variant round trip
    JumpDiffusionParams jd;
    jd.gamma_xi = 1.0;
    jd.gamma_eta = -0.5;
    jd.sigma2 = 1.0;
    jd.lambda = 1.0;
    jd.jump_law = JumpLaw::Laplace;
    jd.rho = 3.0;
    cfg.model = jd;
    CHECK(parse_config(render_config(cfg)) == cfg);
}

TEST_CASE("config errors carry codes and line numbers") {
    try {
        (void)parse_config("[model]\nvariant = brownian_drift\ngamma_xi = 1\n"
                           "gamma_eta = 0\ncov_xx = 2\ncov_xy = 0\ncov_yy = 1\n"
                           "[simulation]\nn_paths = 10\n");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.code() == ErrorCode::MissingSeed);
    }
    try {
        (void)parse_config("[model]\nvariant = brownian_drift\nbogus = 1\n");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.code() == ErrorCode::UnknownKey);
        CHECK(e.line() == 3);
    }
    try {
        (void)parse_config("[model\nvariant = brownian_drift\n");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.code() == ErrorCode::SyntaxError);
        CHECK(e.line() == 1);
    }
    try {
        (void)parse_config("[simulation]\nseed = 1\nseed = 2\n");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.code() == ErrorCode::SyntaxError);
        CHECK(e.line() == 3);
    }
    try {
        (void)parse_config(
            "[model]\nvariant = brownian_drift\ngamma_xi = 1\ngamma_eta = 0\n"
            "cov_xx = 2\ncov_xy = 0\ncov_yy = 1\n[simulation]\nseed = 5\n"
            "[analysis]\nz_grid = 5,4,3\n");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.code() == ErrorCode::SyntaxError);
        CHECK(e.line() == 11);
    }
}

TEST_CASE("condition A violations honor the force flag at parse time") {
    const std::string vg_bad =
        "[model]\nvariant = variance_gamma\ngamma_xi = 0.5\ngamma_eta = 0.5\n"
        "mu = 1\nc = 1\nlambda = 2\n[simulation]\nseed = 2\n";
    try {
        (void)parse_config(vg_bad);
        CHECK(false);
    } catch (const ValidationError& e) {
        CHECK(e.code() == ErrorCode::ConditionAViolation);
    }
    const RunConfig forced = parse_config(vg_bad, /*force_condition_a=*/true);
    CHECK(forced.model_forced);
    // other validation classes stay fatal even with force
    const std::string vg_worse =
        "[model]\nvariant = variance_gamma\ngamma_xi = -5\ngamma_eta = 0\n"
        "mu = 1\nc = 1\nlambda = 2\n[simulation]\nseed = 2\n";
    CHECK_THROWS_AS((void)parse_config(vg_worse, true), ValidationError);
}

TEST_CASE("analyze writes the closed-form profile") {
    RunConfig cfg = parse_config(kMinimalBrownian);
    cfg.workers = 2;
    cfg.analysis.laplace_n = 20000;
    const auto dir = fresh_dir("gou_test_analyze");
    CHECK(run_command("analyze", cfg, false, dir.string()) == kExitOk);
    const std::string profile = slurp(dir / "profile.txt");
    CHECK(std::fabs(value_of(profile, "w") - 1.0) < 1e-8);
    CHECK(std::fabs(value_of(profile, "mu_star") - 1.0) < 1e-8);
    CHECK(value_of(profile, "x0") == 0.0);
    const std::string conditions = slurp(dir / "conditions.txt");
    CHECK(conditions.find("A = Verified") != std::string::npos);
    CHECK(conditions.find("B = Verified") != std::string::npos);
    CHECK(conditions.find("C = Verified") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "rate_function.csv"));
    CHECK(std::filesystem::exists(dir / "rate_function.svg"));
    CHECK(std::filesystem::exists(dir / "laplace_check.csv"));
}

TEST_CASE("manifest lists every output with a matching digest") {
    RunConfig cfg = parse_config(kMinimalBrownian);
    cfg.workers = 2;
    cfg.analysis.laplace_n = 5000;
    const auto dir = fresh_dir("gou_test_manifest");
    REQUIRE(run_command("analyze", cfg, false, dir.string()) == kExitOk);
    const RunManifest m = RunManifest::parse(slurp(dir / "manifest.txt"));
    CHECK(m.seed == 42);
    CHECK(m.command == "analyze");
    CHECK(m.files.size() >= 4);
    for (const auto& [name, digest] : m.files) {
        CAPTURE(name);
        CHECK(sha256_hex(slurp(dir / name)) == digest);
    }
    CHECK(m.config_digest == sha256_hex(render_config(cfg)));

    // a second command merges its files into the same manifest
    cfg.sim.n_paths = 200;
    cfg.sim.horizon = 2.0;
    REQUIRE(run_command("simulate", cfg, false, dir.string()) == kExitOk);
    const RunManifest m2 = RunManifest::parse(slurp(dir / "manifest.txt"));
    CHECK(m2.files.count("path.csv") == 1);
    CHECK(m2.files.count("profile.txt") == 1);
}

TEST_CASE("simulate dumps the documented columns") {
    RunConfig cfg = parse_config(kMinimalBrownian);
    cfg.sim.horizon = 1.0;
    cfg.sim.has_v0 = true;
    cfg.sim.v0 = 2.0;
    const auto dir = fresh_dir("gou_test_simulate");
    REQUIRE(run_command("simulate", cfg, false, dir.string()) == kExitOk);
    const std::string csv = slurp(dir / "path.csv");
    CHECK(csv.rfind("t,xi,eta,Z,runmin_Z,V\n", 0) == 0);
    // 257 data rows for h = 1/256 over [0, 1]
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 258);
}

TEST_CASE("svg rendering is deterministic and fails without data") {
    PlotSpec spec;
    spec.title = "t";
    PlotSeries s;
    s.x = {1.0, 2.0, 3.0};
    s.y = {2.0, 1.0, 4.0};
    spec.series.push_back(s);
    CHECK(render_line_chart(spec) == render_line_chart(spec));
    PlotSpec empty;
    CHECK_THROWS_AS((void)render_line_chart(empty), Error);
}

TEST_CASE("ruin command on the footnote model reports the zero cell") {
    const RunConfig cfg = parse_config(footnote_config(1000), true);
    const auto dir = fresh_dir("gou_test_footruin");
    // degenerate covariance leaves Condition A NotVerified: gate fires
    CHECK(run_command("ruin", cfg, false, dir.string()) == kExitConditionGate);
    CHECK(run_command("ruin", cfg, true, dir.string()) == kExitOk);
    const std::string csv = slurp(dir / "ruin_curve.csv");
    CHECK(csv.rfind("z,psi_hat,ci_lo,ci_hi,n_paths,n_ruined,censored_frac,"
                    "underflow_frac\n", 0) == 0);
    std::istringstream in(csv);
    std::string header, row05, row2;
    std::getline(in, header);
    std::getline(in, row05);
    std::getline(in, row2);
    CHECK(row2.rfind("2,0,0,0.003,", 0) == 0);  // rule-of-three bound 3/1000
}

TEST_CASE("verify runs the full pipeline on the reference model") {
    RunConfig cfg = parse_config(kMinimalBrownian);
    cfg.analysis.z_grid = {5, 10, 20, 40, 80};
    cfg.sim.seed = 20260810;
    cfg.sim.n_paths = 40000;
    cfg.workers = 2;
    const auto dir = fresh_dir("gou_test_verify");
    CHECK(run_command("verify", cfg, false, dir.string()) == kExitOk);
    const std::string report = slurp(dir / "verify_report.txt");
    CHECK(report.find("check slope_within_tol: PASS") != std::string::npos);
    CHECK(report.find("check slope_ci_covers_minus_w: PASS") != std::string::npos);
    CHECK(report.find("result: PASS") != std::string::npos);
    const std::string fit = slurp(dir / "cramer_fit.txt");
    CHECK(fit.find("slope = ") != std::string::npos);
    CHECK(fit.find("c_minus = ") != std::string::npos);
    const double slope = value_of(fit, "slope");
    CHECK(slope < -0.8);
    CHECK(slope > -1.2);
}

TEST_CASE("ruin dumps a path only when asked") {
    RunConfig cfg = parse_config(kMinimalBrownian);
    cfg.analysis.z_grid = {1.0};
    cfg.sim.n_paths = 200;
    cfg.sim.theta = 10.0;
    cfg.sim.horizon = 1.0;
    cfg.workers = 2;
    const auto d1 = fresh_dir("gou_test_nodump");
    REQUIRE(run_command("ruin", cfg, false, d1.string()) == kExitOk);
    CHECK(!std::filesystem::exists(d1 / "path.csv"));
    cfg.output.dump_paths = true;
    const auto d2 = fresh_dir("gou_test_dump");
    REQUIRE(run_command("ruin", cfg, false, d2.string()) == kExitOk);
    const std::string csv = slurp(d2 / "path.csv");
    CHECK(csv.rfind("t,xi,eta,Z,runmin_Z\n", 0) == 0);
}

TEST_CASE("command outputs are byte-identical across reruns and workers") {
    RunConfig cfg = parse_config(kMinimalBrownian);
    cfg.analysis.z_grid = {1.0, 4.0};
    cfg.sim.n_paths = 1500;
    cfg.sim.theta = 15.0;
    cfg.analysis.laplace_n = 4000;

    auto run_all = [&](int workers, const std::string& name) {
        RunConfig c = cfg;
        c.workers = workers;
        const auto dir = fresh_dir(name);
        REQUIRE(run_command("analyze", c, false, dir.string()) == kExitOk);
        REQUIRE(run_command("ruin", c, false, dir.string()) == kExitOk);
        REQUIRE(run_command("constant", c, false, dir.string()) == kExitOk);
        return dir;
    };
    const auto d1 = run_all(1, "gou_test_repro1");
    const auto d8 = run_all(8, "gou_test_repro8");
    for (const auto& entry : std::filesystem::directory_iterator(d1)) {
        const auto name = entry.path().filename().string();
        if (name == "manifest.txt") continue;  // carries wall-clock timestamps
        CAPTURE(name);
        CHECK(slurp(entry.path()) == slurp(d8 / name));
    }
    // manifests agree apart from the timestamp lines
    auto strip_times = [](const std::string& text) {
        std::istringstream in(text);
        std::ostringstream out;
        std::string line;
        while (std::getline(in, line))
            if (line.rfind("started = ", 0) != 0 && line.rfind("finished = ", 0) != 0)
                out << line << "\n";
        return out.str();
    };
    CHECK(strip_times(slurp(d1 / "manifest.txt")) ==
          strip_times(slurp(d8 / "manifest.txt")));
}

#ifdef GOURUIN_BIN
TEST_CASE("binary honors the exit-code contract") {
    namespace fs = std::filesystem;
    const auto dir = fresh_dir("gou_test_exec");
    auto run = [&](const std::string& args) {
        const std::string cmd = std::string(GOURUIN_BIN) + " " + args + " > " +
                                (dir / "stdout.txt").string() + " 2> " +
                                (dir / "stderr.txt").string();
        const int rc = std::system(cmd.c_str());
        return WEXITSTATUS(rc);
    };
    auto write = [&](const char* name, const std::string& text) {
        std::ofstream out(dir / name);
        out << text;
        return (dir / name).string();
    };

    const std::string okcfg = write("ok.cfg", footnote_config(400));
    CHECK(run("ruin --config " + okcfg + " --force --out " +
              (dir / "out1").string()) == 0);

    const std::string noseed = write(
        "noseed.cfg",
        "[model]\nvariant = brownian_drift\ngamma_xi = 1\ngamma_eta = 0\n"
        "cov_xx = 2\ncov_xy = 0\ncov_yy = 1\n[simulation]\nn_paths = 10\n");
    CHECK(run("analyze --config " + noseed) == 1);

    const std::string vg_bad = write(
        "vgbad.cfg",
        "[model]\nvariant = variance_gamma\ngamma_xi = 0.5\ngamma_eta = 0.5\n"
        "mu = 1\nc = 1\nlambda = 2\n[simulation]\nseed = 2\nn_paths = 50\n"
        "t_max = 5\ntheta = 5\n[analysis]\nz_grid = 1,2\n");
    CHECK(run("ruin --config " + vg_bad + " --out " + (dir / "out2").string()) == 2);
    CHECK(run("ruin --config " + vg_bad + " --force --out " +
              (dir / "out3").string()) == 0);

    // verify with no ruins anywhere: the fit has nothing to work with
    const std::string toofew = write("toofew.cfg", footnote_config(300));
    CHECK(run("verify --config " + toofew + " --force --out " +
              (dir / "out4").string()) == 3);

    CHECK(run("bogus --config " + okcfg) != 0);
}
#endif
