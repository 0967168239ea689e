#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "ncsoliton/cli.hpp"
#include "ncsoliton/error.hpp"
#include "ncsoliton/io.hpp"

using namespace ncsoliton;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("ncsoliton-test-" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli_run(std::vector<std::string> args) {
    args.insert(args.begin(), "ncsoliton");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("non-finite numbers survive JSON") {
    for (double v : {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}) {
        CHECK(io::to_double(io::json::parse(io::number(v).dump())) == v);
    }
    CHECK(std::isnan(io::to_double(io::number(std::nan("")))));
    CHECK_THROWS_AS(io::to_double(io::json("x")), DomainError);
}

TEST_CASE("construct -> write -> read -> verify round trip is bit-identical") {
    TempDir dir;
    const auto path = (dir.path / "c.json").string();
    const auto r = cli_run({"construct", "--p", "3", "--mu", "auto2x", "--out", path});
    REQUIRE(r.code == 0);
    const auto j = io::read_json(path);
    CHECK(j.contains("params"));
    CHECK(j.contains("thresholds"));
    CHECK(j.contains("b_star"));
    CHECK(j.contains("s_star"));
    CHECK(j.contains("residual_sup"));
    CHECK(j.at("alpha").is_array());

    const auto back = io::soliton_from_json(j);
    const auto t = compute_thresholds(3);
    SolitonParams p;
    p.a = 2.0 * t.mu_star;
    const auto direct = construct_soliton(p, t);
    CHECK(back.alpha.values == direct.alpha.values);
    CHECK(back.b_star == direct.b_star);
    CHECK(back.params.a == direct.params.a);
    CHECK(back.diagnostics.l1_norms == direct.diagnostics.l1_norms);

    const auto v = cli_run({"verify", path});
    CHECK(v.code == 0);
    CHECK(v.out.find("all checks passed") != std::string::npos);
    CHECK(fs::exists(dir.path / "c.report.json"));
    const auto report = io::read_json(dir.path / "c.report.json");
    CHECK(report.at("passed") == true);
    CHECK(report.at("decay_fit").contains("c1_hat"));
}

TEST_CASE("identical configs give identical bytes") {
    TempDir dir;
    REQUIRE(cli_run({"construct", "--mu", "7.5", "--out", (dir.path / "a.json").string()}).code == 0);
    REQUIRE(cli_run({"construct", "--mu", "7.5", "--out", (dir.path / "b.json").string()}).code == 0);
    CHECK(io::read_file(dir.path / "a.json") == io::read_file(dir.path / "b.json"));
}

TEST_CASE("a tampered profile fails verification with exit code 1") {
    TempDir dir;
    const auto path = dir.path / "c.json";
    REQUIRE(cli_run({"construct", "--mu", "6", "--out", path.string()}).code == 0);
    auto j = io::read_json(path);
    j["alpha"][3] = j["alpha"][3].get<double>() * 1.1;
    io::write_json(path, j);
    const auto v = cli_run({"verify", path.string(), "--report", (dir.path / "r.json").string()});
    CHECK(v.code == cli::kVerificationFailed);
    CHECK(v.out.find("FAIL") != std::string::npos);
    CHECK(io::read_json(dir.path / "r.json").at("passed") == false);
}

TEST_CASE("regime and usage errors exit with 2 and name the condition") {
    const auto r = cli_run({"construct", "--p", "3", "--mu", "0.1"});
    CHECK(r.code == cli::kUsageError);
    CHECK(r.err.find("mu_star") != std::string::npos);
    CHECK(cli_run({"construct", "--mu", "6", "--iter-tol", "3"}).code == 2);
    CHECK(cli_run({"construct", "--mu", "six"}).code == 2);
    CHECK(cli_run({"construct", "--mu", "auto0.5x"}).code == 2);
    CHECK(cli_run({"construct", "--mu", "6", "--p", "1"}).code == 2);
    CHECK(cli_run({"construct"}).code == 2);
    CHECK(cli_run({"bogus"}).code == 2);
    CHECK(cli_run({"evolve", "--initial", "chi0", "--p", "1"}).code == 2);
    CHECK(cli_run({"specfun", "--a", "-1"}).code == 2);
    CHECK(cli_run({"verify", "/nonexistent/file.json"}).code == 2);
}

TEST_CASE("help exits 0") {
    const auto r = cli_run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("construct") != std::string::npos);
    CHECK(cli_run({"construct", "--help"}).code == 0);
}

TEST_CASE("config file entries apply, flags win, unknown keys are rejected") {
    TempDir dir;
    const auto cfg = dir.path / "run.ini";
    {
        std::ofstream f(cfg);
        f << "# construct settings\nmu = auto3x\nroot-tol = 1e-10\n";
    }
    std::ostringstream sink;
    const char* argv1[] = {"ncsoliton", "--config", cfg.c_str(), "construct"};
    auto c = cli::parse_command_line(4, argv1, sink);
    CHECK(c.subcommand == "construct");
    CHECK(c.params.at("mu") == "auto3x");
    CHECK(c.params.at("root-tol") == "1e-10");
    const char* argv2[] = {"ncsoliton", "--config", cfg.c_str(), "construct", "--mu", "9"};
    c = cli::parse_command_line(6, argv2, sink);
    CHECK(c.params.at("mu") == "9");
    {
        std::ofstream f(cfg);
        f << "nonsense = 1\n";
    }
    CHECK_THROWS_AS(cli::parse_command_line(4, argv1, sink), UsageError);
}

TEST_CASE("relative outputs go to the output directory") {
    TempDir dir;
    const auto r = cli_run({"--out-dir", dir.path.string(), "spectrum", "--n", "6", "--out", "s.csv"});
    REQUIRE(r.code == 0);
    const auto text = io::read_file(dir.path / "s.csv");
    CHECK(text.rfind("k,eigenvalue\n", 0) == 0);
    // L_6 has its smallest zero near 0.2228.
    CHECK(text.find("0.22284660417926") != std::string::npos);
}

TEST_CASE("dispatch on a RunConfig") {
    TempDir dir;
    cli::RunConfig c;
    c.subcommand = "specfun";
    c.params = {{"a", "1"}, {"table", "expint"}, {"n", "4"}, {"out", "e.csv"}};
    c.output_dir = dir.path;
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cli::dispatch(c, out, err) == 0);
    const auto text = io::read_file(dir.path / "e.csv");
    CHECK(text.find("n,E_n,scaled_E_n,lower,upper") == 0);
    c.params["a"] = "0";
    CHECK(cli::dispatch(c, out, err) == 2);
    c.subcommand = "nope";
    CHECK(cli::dispatch(c, out, err) == 2);
}

TEST_CASE("sweep and evolve subcommands") {
    TempDir dir;
    const auto s = cli_run({"sweep", "--factors", "2,4", "--out", (dir.path / "s.csv").string()});
    CHECK(s.code == 0);
    CHECK(s.out.find("fitted O-term constant") != std::string::npos);
    const auto rows = io::read_file(dir.path / "s.csv");
    CHECK(std::count(rows.begin(), rows.end(), '\n') == 3);

    const auto c = dir.path / "c.json";
    REQUIRE(cli_run({"construct", "--mu", "6", "--out", c.string()}).code == 0);
    const auto e = cli_run({"evolve", "--from", c.string(), "--T", "0.5", "--record-every", "50", "--out",
                            (dir.path / "e.csv").string(), "--snapshots", (dir.path / "snap.json").string()});
    CHECK(e.code == 0);
    CHECK(e.out.find("zeta_hat") != std::string::npos);
    const auto snaps = io::read_json(dir.path / "snap.json");
    CHECK(snaps.at("snapshots").size() >= 2);
    const auto g = cli_run({"evolve", "--initial", "gaussian", "--width", "2", "--xmax", "200", "--T", "0.2",
                            "--out", (dir.path / "g.csv").string()});
    CHECK(g.code == 0);
}

TEST_CASE("noise is seed-controlled") {
    TempDir dir;
    auto go = [&](const std::string& seed, const std::string& name) {
        REQUIRE(cli_run({"--seed", seed, "evolve", "--initial", "soliton", "--mu", "6", "--noise", "0.01", "--T", "0.1",
                         "--out", (dir.path / name).string()})
                    .code == 0);
        return io::read_file(dir.path / name);
    };
    CHECK(go("1", "a.csv") == go("1", "b.csv"));
    CHECK(go("1", "a.csv") != go("2", "c.csv"));
}

TEST_CASE("atomic writes leave no temporary files") {
    TempDir dir;
    io::write_atomic(dir.path / "sub" / "x.txt", "hello");
    CHECK(io::read_file(dir.path / "sub" / "x.txt") == "hello");
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir.path / "sub")) {
        (void)e;
        ++files;
    }
    CHECK(files == 1);
}

TEST_CASE("csv numbers round-trip") {
    io::CsvTable t({"x"});
    t.add_row({0.1 + 0.2});
    const auto s = t.str();
    CHECK(std::stod(s.substr(2)) == 0.1 + 0.2);
    CHECK_THROWS_AS(t.add_row({1.0, 2.0}), DomainError);
}
