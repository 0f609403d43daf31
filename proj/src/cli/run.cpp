#include <cstdlib>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "volkov/cli.hpp"
#include "volkov/error.hpp"

namespace volkov::cli {

namespace {

const std::filesystem::path default_output_dir = "volkov-fp-out";

unsigned parse_workers_env() {
    const char* raw = std::getenv(workers_env);
    if (!raw || !*raw) return 1;
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (*end != '\0' || v < 1 || v > 1024)
        throw ConfigError(fmt::format("{}='{}' is not a worker count between 1 and 1024", workers_env, raw));
    return static_cast<unsigned>(v);
}

json read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config '{}' is not valid JSON: {}", path.string(), e.what()));
    }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
}

}  // namespace

json summary_json(const ScenarioResult& result, const std::string& hash) {
    json assertions = json::array();
    for (const auto& a : result.assertions) {
        json measured = std::isfinite(a.measured) ? json(a.measured) : json(fmt::format("{}", a.measured));
        assertions.push_back({{"name", a.name},
                              {"anchor", a.anchor},
                              {"measured", measured},
                              {"tolerance", a.tolerance},
                              {"relation", a.relation},
                              {"pass", a.pass}});
    }
    json files = json::array();
    for (const auto& t : result.tables) files.push_back(t.file);
    return {{"scenario", result.scenario}, {"anchor", result.anchor}, {"config_sha256", hash},
            {"pass", result.pass()},       {"assertions", assertions},  {"report", result.report},
            {"tables", files}};
}

void write_artifacts(const ScenarioResult& result, const std::string& hash, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
    for (const auto& t : result.tables) write_file(dir / t.file, fmt::format("# config_sha256={}\n{}", hash, t.body));
    write_file(dir / "summary.json", summary_json(result, hash).dump(2) + "\n");
}

int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
    try {
        const json doc = read_config(inv.config);
        const ScenarioConfig cfg = parse_config(inv.scenario, doc, inv.config.parent_path());
        const unsigned workers = inv.workers ? *inv.workers : cfg.workers ? *cfg.workers : parse_workers_env();
        const std::filesystem::path dir = inv.out ? *inv.out : cfg.output_dir.value_or(default_output_dir);

        const ScenarioResult result = execute(cfg, workers);
        write_artifacts(result, cfg.hash, dir);
        for (const auto& a : result.assertions)
            out << fmt::format("{} {}: {:.6g} {} {:.6g}\n", a.pass ? "PASS" : "FAIL", a.name, a.measured, a.relation,
                               a.tolerance);
        out << fmt::format("{}: {} ({})\n", result.scenario, result.pass() ? "pass" : "FAIL", dir.string());
        return static_cast<int>(result.pass() ? ExitCode::pass : ExitCode::assertion_failure);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::config_error);
    } catch (const GridError& e) {
        err << "undersampled grid: " << e.what() << '\n';
        return static_cast<int>(ExitCode::domain_error);
    } catch (const DomainError& e) {
        err << "numerical domain error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::domain_error);
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Plane-wave Dirac modes and fermionic projector checks"};
    Invocation inv;
    std::string out_dir;
    unsigned workers = 0;
    app.add_option("scenario", inv.scenario, "scenario to run")
        ->required()
        ->check(CLI::IsMember(scenario_names()));
    app.add_option("--config", inv.config, "JSON config")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--workers", workers, fmt::format("worker threads (default: config, then ${}, then 1)", workers_env))
        ->check(CLI::Range(1u, 1024u));
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "config error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::config_error);
    }
    if (!out_dir.empty()) inv.out = out_dir;
    if (workers > 0) inv.workers = workers;
    return run(inv, out, err);
}

}  // namespace volkov::cli
