#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "eigenbound/commands.hpp"
#include "eigenbound/errors.hpp"

using namespace eigenbound;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run cli(const std::string& args) {
    std::string cmd = std::string(EIGENBOUND_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

RunConfig one(const Settings& file, const Settings& flags = {}) {
    auto v = resolve_config(file, flags, std::nullopt);
    REQUIRE(v.size() == 1);
    return v[0];
}

}  // namespace

TEST_CASE("config file grammar") {
    Settings s = parse_config_text(R"(
# comment
[problem]
a = "1"      # trailing comment
b = "0"
D = 1
case = ND
[numerics]
N = 500
[run]
n_max = 2
)");
    RunConfig c = one(s);
    CHECK(c.a == "1");
    CHECK(c.b == "0");
    CHECK(c.D == 1.0);
    CHECK(c.boundary == BoundaryCase::ND);
    CHECK(c.N == 500);
    CHECK(c.n_max == 2);
    CHECK(c.eps_b == 1e-8);
}

TEST_CASE("config errors name the line") {
    try {
        parse_config_text("[problem]\nfoo = 1\n", "f.cfg");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("f.cfg:2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("a = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[problem]\na = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[solver]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[problem]\njust words\n"), ConfigError);
}

TEST_CASE("preset with infinite D") {
    RunConfig c = one(parse_config_text("[problem]\npreset = ou\nD = inf\ncase = DN\n"));
    CHECK(c.preset == "ou");
    CHECK(c.D == infinity);
    ProblemSpec p = to_problem(c);
    CHECK(p.b(2.0) == -2.0);
    CHECK(p.infinite());
}

TEST_CASE("validation errors are aggregated") {
    try {
        one(parse_config_text("[problem]\npreset = ou\ncase = XY\n[run]\nn_max = 0\n"));
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        std::string m = e.what();
        CHECK(m.find("ND, DN, NN") != std::string::npos);
        CHECK(m.find("n_max") != std::string::npos);
    }
    CHECK_THROWS_AS(one({{"problem.preset", "heat"}}), ConfigError);
    CHECK_THROWS_AS(one({{"problem.a", "1+"}, {"problem.b", "0"}}), ConfigError);
    CHECK_THROWS_AS(one({{"problem.a", "1"}}), ConfigError);
    CHECK_THROWS_AS(one({{"problem.preset", "ou"}, {"numerics.eps_b", "-1"}}), ConfigError);
    CHECK_THROWS_AS(one({{"problem.preset", "ou"}, {"numerics.schedule", "4, 2"}}), ConfigError);
}

TEST_CASE("precedence: inline over environment over file") {
    Settings file = parse_config_text("[problem]\npreset = laplacian\nD = 2\n[numerics]\neps_b = 1e-6\n");
    CHECK(one(file).eps_b == 1e-6);
    CHECK(resolve_config(file, {}, "1e-7")[0].eps_b == 1e-7);
    CHECK(resolve_config(file, {{"problem.D", "3"}}, "1e-7")[0].D == 3.0);

    RunConfig swapped = one(file, {{"problem.a", "1+x"}, {"problem.b", "0"}});
    CHECK(swapped.preset.empty());
    CHECK(swapped.a == "1+x");
    CHECK(swapped.D == 2.0);
}

TEST_CASE("sweeps expand in input order") {
    auto v = resolve_config({{"problem.preset", "laplacian, ou"}, {"problem.D", "1,2,inf"}}, {}, std::nullopt);
    REQUIRE(v.size() == 6);
    CHECK(v[0].preset == "laplacian");
    CHECK(v[0].D == 1.0);
    CHECK(v[2].D == infinity);
    CHECK(v[3].preset == "ou");
}

TEST_CASE("property: echoed config re-parses to the same RunConfig") {
    std::vector<RunConfig> configs = {
        one({{"problem.preset", "ou"}, {"problem.D", "inf"}, {"problem.case", "DN"}}),
        one({{"problem.a", "1 + x^2"}, {"problem.b", "-0.3*x"}, {"problem.D", "2.5"}, {"problem.case", "NN"},
             {"numerics.eps_b", "3.3e-9"}, {"numerics.schedule", "1.5,3,6"}, {"run.format", "csv"},
             {"run.renormalize", "false"}, {"run.out", "/tmp/x.json"}}),
        one({{"problem.preset", "laplacian"}, {"numerics.eps_q", "0.1"}, {"run.grid", "8"}}),
    };
    for (const RunConfig& c : configs) {
        RunConfig back = one(parse_config_text(echo_config(c)));
        CHECK(back == c);
    }
}

TEST_CASE("commands through the library") {
    RunConfig lap = one({{"problem.preset", "laplacian"}});
    CommandResult b = cmd_bounds(lap);
    CHECK(b.exit_code == exit_ok);
    const json& r = b.report["results"];
    for (const char* k : {"delta", "lower_basic", "upper_basic", "delta1", "delta1_prime", "lower_improved",
                          "upper_improved", "argmax_x", "positivity"})
        CHECK(r.contains(k));
    CHECK(r["delta"].get<double>() == doctest::Approx(0.25));
    CHECK(b.report["version"] == version);
    CHECK(b.report.contains("provenance"));
    CHECK(b.report["series"].contains("x"));
    CHECK(b.report["config"].get<std::string>() == echo_config(lap));

    CommandResult v = cmd_verify(lap);
    CHECK(v.exit_code == exit_ok);
    for (const auto& verdict : v.report["verdicts"]) CHECK(verdict["pass"].get<bool>());

    CommandResult ou = cmd_bounds(one({{"problem.preset", "ou"}, {"problem.D", "inf"}}));
    CHECK(ou.report["results"]["lower_basic"] == 0.0);
    CHECK(ou.report["results"]["upper_basic"] == 0.0);
    CHECK(ou.report["results"]["positivity"].get<std::string>().find("lambda0 = 0") != std::string::npos);

    CommandResult bad = run_command("iterate", one({{"problem.a", "x-0.5"}, {"problem.b", "0"}}));
    CHECK(bad.exit_code == exit_hypothesis);
    CHECK(bad.report["error"]["kind"] == "hypothesis");
}

TEST_CASE("report output is deterministic") {
    RunConfig c = one({{"problem.preset", "ou"}, {"problem.D", "3"}, {"problem.case", "DN"}});
    CHECK(cmd_iterate(c).report.dump() == cmd_iterate(c).report.dump());
}

TEST_CASE("csv rows") {
    RunConfig c = one({{"problem.preset", "laplacian"}});
    std::string csv = to_csv(cmd_bounds(c).report);
    CHECK(csv.rfind("quantity,value\n", 0) == 0);
    CHECK(csv.find("results.delta,0.25\n") != std::string::npos);
}

TEST_CASE("exit codes of the binary") {
    Run ok = cli("verify --preset laplacian --D 1 --case ND");
    CHECK(ok.code == 0);
    CHECK(json::parse(ok.out)["verdicts"].size() > 5);

    CHECK(cli("iterate --preset laplacian --n-max 0").code == 2);
    Run xy = cli("bounds --preset laplacian --case XY");
    CHECK(xy.code == 2);
    CHECK(json::parse(xy.out)["error"]["message"].get<std::string>().find("ND, DN, NN") != std::string::npos);
    CHECK(cli("bounds --config /nonexistent/file.cfg").code == 2);
    CHECK(cli("bounds --a 'x-0.5' --b 0").code == 3);
    CHECK(cli("bounds --a 1 --b x --D 64 --case DN").code == 4);
    CHECK(cli("verify --a '1+x^2' --b 0 --N 16 --case ND").code == 5);

    Run ou = cli("bounds --preset ou --D inf --case ND");
    CHECK(ou.code == 0);
    CHECK(json::parse(ou.out)["results"]["upper_basic"] == 0.0);
}

TEST_CASE("config file, sweep and --out through the binary") {
    const std::string cfg = "/tmp/eigenbound_test.cfg", out = "/tmp/eigenbound_test.json";
    std::ofstream(cfg) << "[problem]\npreset = laplacian\nD = 1, 2\ncase = DN\n";
    Run r = cli("bounds --config " + cfg + " --out " + out);
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(out);
    json j = json::parse(in);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 2);
    CHECK(j[0]["results"]["delta"].get<double>() == doctest::Approx(0.25));
    CHECK(j[1]["results"]["delta"].get<double>() == doctest::Approx(1.0));
    std::remove(cfg.c_str());
    std::remove(out.c_str());

    Run env = cli("bounds --preset laplacian");
    setenv("EIGENBOUND_TOLERANCE", "1e-7", 1);
    Run env2 = cli("bounds --preset laplacian");
    unsetenv("EIGENBOUND_TOLERANCE");
    CHECK(json::parse(env.out)["config"].get<std::string>().find("eps_b = 1e-08") != std::string::npos);
    CHECK(json::parse(env2.out)["config"].get<std::string>().find("eps_b = 1e-07") != std::string::npos);
}
