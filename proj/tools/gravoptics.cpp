// gravoptics command-line front end.
//
//   gravoptics run <config.json> [--out FILE] [--format csv|json] [--workers N] [--tol REL]
//   gravoptics validate <config.json>
//   gravoptics list-scenarios
//
// Exit codes: 0 success, 1 validation failure, 2 computation failure.

#include "gravoptics/scenario.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitFailed = 2;

bool read_file(const std::string& path, std::string& out)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

void print_diagnostics(const gravoptics::ValidationReport& r, const std::string& file)
{
    for (const auto& w : r.warnings)
        std::cerr << file << ": warning: " << (w.path.empty() ? "/" : w.path) << ": " << w.message << "\n";
    for (const auto& e : r.errors)
        std::cerr << file << ": error: " << (e.path.empty() ? "/" : e.path) << ": " << e.message << "\n";
}

int default_workers()
{
    if (const char* env = std::getenv("GRAVOPTICS_WORKERS"))
    {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n >= 1 && n <= 1024)
            return static_cast<int>(n);
        std::cerr << "warning: ignoring GRAVOPTICS_WORKERS='" << env << "'\n";
    }
    return 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Photons and scalar particles in weak static gravitational fields"};
    app.set_version_flag("--version", gravoptics::kToolVersion);
    app.require_subcommand(1);

    std::string config_path, out_path, format;
    int workers = default_workers();
    double tol = 0.0;

    auto* run = app.add_subcommand("run", "Run a scenario and write its result table");
    run->add_option("config", config_path, "Scenario configuration (JSON)")->required();
    run->add_option("--out", out_path, "Output file (default: stdout)");
    run->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--workers", workers, "Concurrent sweep points (default: GRAVOPTICS_WORKERS or 1)")
        ->check(CLI::Range(1, 1024));
    auto* tol_opt = run->add_option("--tol", tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Validate a configuration without running it");
    validate->add_option("config", validate_path, "Scenario configuration (JSON)")->required();

    auto* list = app.add_subcommand("list-scenarios", "List the available scenario kinds");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalid;
    }

    if (*list)
    {
        for (const auto& s : gravoptics::scenario_catalog())
            std::cout << s.name << "\t" << s.summary << "\n";
        return kExitOk;
    }

    const std::string& path = *run ? config_path : validate_path;
    std::string text;
    if (!read_file(path, text))
    {
        std::cerr << path << ": error: cannot read file\n";
        return kExitInvalid;
    }
    const gravoptics::ValidationReport report = gravoptics::validate_config(text);
    print_diagnostics(report, path);
    if (!report.ok())
        return kExitInvalid;

    if (*validate)
    {
        std::cout << path << ": ok (" << gravoptics::scenario_name(report.config->kind) << ", "
                  << report.warnings.size() << " warning" << (report.warnings.size() == 1 ? "" : "s") << ")\n";
        return kExitOk;
    }

    gravoptics::RunOptions options;
    options.workers = workers;
    if (*tol_opt)
        options.rel_tol = tol;
    gravoptics::ResultTable table;
    try
    {
        table = gravoptics::run_scenario(*report.config, options);
    }
    catch (const gravoptics::ConfigError& e)
    {
        std::cerr << path << ": error: " << e.what() << "\n";
        return kExitInvalid;
    }
    catch (const std::exception& e)
    {
        std::cerr << path << ": computation failed: " << e.what() << "\n";
        return kExitFailed;
    }

    if (format.empty())
        format = report.config->format;
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out_path.empty())
    {
        file.open(out_path, std::ios::binary);
        if (!file)
        {
            std::cerr << out_path << ": error: cannot open for writing\n";
            return kExitFailed;
        }
        os = &file;
    }
    if (format == "json")
        table.write_json(*os);
    else
        table.write_csv(*os);
    os->flush();
    if (!*os)
    {
        std::cerr << "error: failed writing output\n";
        return kExitFailed;
    }
    return kExitOk;
}
