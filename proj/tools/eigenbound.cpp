#include <fstream>
#include <future>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eigenbound/commands.hpp"
#include "eigenbound/errors.hpp"

using namespace eigenbound;

int main(int argc, char** argv) {
    CLI::App app{"Two-sided bounds and iterative estimates for the lowest eigenvalue of a f'' + b f' on an interval"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1, 1);

    std::string config_path, a, b, D, boundary, preset, format, out_path;
    int N = 0, n_max = 0;
    for (const char* name : {"bounds", "iterate", "oracle", "verify"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "key=value config file");
        sub->add_option("--a", a, "diffusion coefficient a(x)");
        sub->add_option("--b", b, "drift coefficient b(x)");
        sub->add_option("--D", D, "right end, a number or inf; comma list for a sweep");
        sub->add_option("--case", boundary, "ND, DN or NN");
        sub->add_option("--preset", preset, "builtin coefficients (laplacian, ou); comma list for a sweep");
        sub->add_option("--N", N, "bulk grid panels");
        sub->add_option("--n-max", n_max, "iteration count");
        sub->add_option("--format", format, "json or csv");
        sub->add_option("--out", out_path, "write the report here instead of stdout");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    auto given = [&](const char* opt) { return app.get_subcommands().front()->count(opt) > 0; };

    Settings inline_flags;
    if (given("--a")) inline_flags.emplace_back("problem.a", a);
    if (given("--b")) inline_flags.emplace_back("problem.b", b);
    if (given("--D")) inline_flags.emplace_back("problem.D", D);
    if (given("--case")) inline_flags.emplace_back("problem.case", boundary);
    if (given("--preset")) inline_flags.emplace_back("problem.preset", preset);
    if (given("--N")) inline_flags.emplace_back("numerics.N", std::to_string(N));
    if (given("--n-max")) inline_flags.emplace_back("run.n_max", std::to_string(n_max));
    if (given("--format")) inline_flags.emplace_back("run.format", format);
    if (given("--out")) inline_flags.emplace_back("run.out", out_path);

    std::vector<RunConfig> runs;
    try {
        Settings file = config_path.empty() ? Settings{} : read_config_file(config_path);
        runs = resolve_config(file, inline_flags);
    } catch (const std::exception& e) {
        std::cout << error_object(e).dump(2) << "\n";
        return exit_code_for(e);
    }

    int rc = exit_ok;
    nlohmann::json reports = nlohmann::json::array();
    std::string csv;
    // Sweep items run concurrently; reports keep the input order.
    std::vector<std::future<CommandResult>> pending;
    for (const RunConfig& c : runs)
        pending.push_back(std::async(std::launch::async, [&command, c] { return run_command(command, c); }));
    for (auto& f : pending) {
        CommandResult res = f.get();
        rc = std::max(rc, res.exit_code);
        if (runs.front().format == OutputFormat::csv) csv += to_csv(res.report);
        reports.push_back(std::move(res.report));
    }
    std::string text = runs.front().format == OutputFormat::csv
                           ? csv
                           : (reports.size() == 1 ? reports[0] : reports).dump(2) + "\n";
    const std::string& dest = runs.front().out;
    if (dest.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(dest);
        if (!f) {
            std::cerr << "cannot write " << dest << "\n";
            return exit_config;
        }
        f << text;
    }
    return rc;
}
