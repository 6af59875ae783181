#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsdle/config.hpp"
#include "rsdle/convergence.hpp"
#include "rsdle/csv_io.hpp"
#include "rsdle/error.hpp"
#include "rsdle/run.hpp"

namespace fs = std::filesystem;
using namespace rsdle;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitBlowup = 3;

fs::path default_output(const CaseConfig& config, const std::string& flag) {
    if (!flag.empty()) return flag;
    if (!config.output_dir.empty()) return config.output_dir;
    const char* root = std::getenv("RSDLE_OUTPUT_ROOT");
    return fs::path(root && *root ? root : "out") / config.case_id;
}

const char* describe(const std::string& id) {
    if (id == "case1") return "strong supersonic compression, gamma=1.4, [10,20]";
    if (id == "case2") return "supersonic rarefaction, gamma=1.4, [10,20]";
    if (id == "case3_eps10") return "subsonic oscillation, eps=10, gamma=3, periodic";
    if (id == "case3_eps1") return "oscillation, eps=1, gamma=3, periodic";
    if (id == "case3_eps0.1") return "oscillation, eps=0.1 (mixed regime), gamma=3, periodic";
    if (id == "case4") return "sea-level compression, alpha=beta=-1300, [1,5]";
    if (id == "case5") return "sea-level rarefaction, alpha=beta=+1300, [1,5]";
    if (id == "case6") return "negative velocity, alpha=+1300, beta=-1300, [1,5]";
    if (id == "case7") return "negative velocity, alpha=beta=+1300, [1,5]";
    return "";
}

int cmd_run(const std::string& target, bool paper_scale, const std::string& output, bool timings) {
    const CaseConfig config = resolve_case(target, paper_scale);
    const fs::path dir = default_output(config, output);
    RunOptions options;
    options.record_timings = timings;
    const RunOutcome out = run_case(config, dir, options);

    std::printf("case     %s (%zu cells)\n", config.case_id.c_str(), config.grid.cells);
    std::printf("status   %s\n", std::string(to_string(out.status)).c_str());
    if (out.result) {
        const SimulationResult& r = *out.result;
        std::printf("time     %.6g after %zu steps\n", r.run.time, r.run.steps);
        if (r.blowup)
            std::printf("blow-up  t=%.6g at r=%.6g (%s)\n", r.blowup->t_detect,
                        r.grid.center(std::min(r.blowup->cell, r.grid.size() - 1)),
                        std::string(to_string(r.blowup->trigger)).c_str());
        if (r.audit.ran())
            std::printf("audit    %zu events, %zu judged, %zu violations%s\n", r.audit.events.size(),
                        r.audit.audit.judged, r.audit.audit.violations.size(),
                        r.audit.heuristic ? " (heuristic)" : "");
    } else {
        std::fprintf(stderr, "error: %s\n", out.error.c_str());
    }
    std::printf("output   %s\n", dir.string().c_str());

    switch (out.status) {
        case RunStatus::Completed: return kExitOk;
        case RunStatus::Blowup: return kExitBlowup;
        case RunStatus::Error: return kExitRuntime;
    }
    return kExitRuntime;
}

int cmd_list() {
    for (const std::string& id : builtin_case_ids()) std::printf("%-13s %s\n", id.c_str(), describe(id));
    return kExitOk;
}

int cmd_converge(const std::string& target, std::vector<std::size_t> meshes, const std::string& output,
                 double t_end) {
    try {
        validate_meshes(meshes);
    } catch (const DomainError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitUsage;
    }
    CaseConfig config = resolve_case(target);
    if (t_end >= 0.0) config.t_end = t_end;
    const fs::path dir = default_output(config, output);
    ensure_writable_directory(dir);
    try {
        const ConvergenceStudy study = convergence_study(config, meshes);
        write_convergence_csv(dir / "convergence.csv", study);
        std::fputs(format_convergence_csv(study).c_str(), stdout);
    } catch (const ConvergenceAborted& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitBlowup;
    }
    return kExitOk;
}

int cmd_check(const std::string& target) {
    const CaseConfig config = resolve_case(target);
    std::fputs(format_config(config).c_str(), stdout);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radially symmetric isentropic Euler solver"};
    app.require_subcommand(1);

    std::string target, output;
    bool paper_scale = false, timings = false;
    auto* run = app.add_subcommand("run", "Run a builtin case or a config file");
    run->add_option("case", target, "Builtin id or config path")->required();
    run->add_flag("--paper-scale", paper_scale, "Use 8192 cells for builtin cases");
    run->add_option("-o,--output", output, "Output directory");
    run->add_flag("--record-timings", timings, "Add wall-clock timings to the manifest");

    app.add_subcommand("list-cases", "List builtin cases");

    std::vector<std::size_t> meshes;
    double t_end = -1.0;
    auto* converge = app.add_subcommand("converge", "Self-convergence study over several meshes");
    converge->add_option("case", target, "Builtin id or config path")->required();
    converge->add_option("--meshes", meshes, "Cell counts, coarse to fine")->delimiter(',')->required();
    converge->add_option("-o,--output", output, "Output directory");
    converge->add_option("--t-end", t_end, "Override the final time");

    auto* check = app.add_subcommand("check", "Validate a config and print it normalized");
    check->add_option("case", target, "Builtin id or config path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(target, paper_scale, output, timings);
        if (converge->parsed()) return cmd_converge(target, meshes, output, t_end);
        if (check->parsed()) return cmd_check(target);
        return cmd_list();
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const LookupError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitUsage;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
