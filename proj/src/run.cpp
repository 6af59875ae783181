#include "rsdle/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <system_error>

#include <json.hpp>

#include "rsdle/csv_io.hpp"
#include "rsdle/error.hpp"

namespace rsdle {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::vector<double> snapshot_targets(double t_end, std::size_t count) {
    if (count < kMinSnapshots) throw DomainError("snapshot_targets: need at least 2 snapshots");
    std::vector<double> t(count);
    for (std::size_t k = 0; k < count; ++k)
        t[k] = static_cast<double>(k) * t_end / static_cast<double>(count - 1);
    t.back() = t_end;
    return t;
}

std::size_t trajectory_frame_cap(const CaseConfig& config) {
    const std::size_t by_budget = kTrajectoryValueBudget / (4 * config.grid.cells);
    return std::max<std::size_t>(16, std::min(config.diagnostics.trajectory_frames, by_budget));
}

std::vector<double> audit_origins(const RadialGrid& grid, std::size_t count) {
    std::vector<double> r(count);
    const double width = grid.outer() - grid.inner();
    for (std::size_t k = 0; k < count; ++k)
        r[k] = grid.inner() + (static_cast<double>(k) + 0.5) * width / static_cast<double>(count);
    return r;
}

namespace {

SnapshotRecord make_record(double time, const PrimitiveField& field, const RadialGrid& grid, const GasModel& model) {
    return SnapshotRecord{time, field, gradient_variables_masked(field, grid, model)};
}

BlowupTrigger trigger_for(EventKind kind) {
    return kind == EventKind::NonFinite ? BlowupTrigger::NonFinite : BlowupTrigger::PositivityFailure;
}

CharacteristicPath truncated(CharacteristicPath path, double t_window) {
    const auto keep = std::find_if(path.samples.begin(), path.samples.end(),
                                   [&](const PathSample& s) { return s.t > t_window; });
    if (keep != path.samples.end()) {
        path.samples.erase(keep, path.samples.end());
        path.exit = PathExit::None;
    }
    return path;
}

AuditSummary run_audit(const SimulationResult& result) {
    AuditSummary summary;
    const std::size_t n = result.config.diagnostics.audit_paths;
    if (n == 0 || !result.trajectory || result.trajectory->frames() < 2) return summary;
    summary.paths_per_family = n;
    summary.heuristic = result.config.model.gamma != 3.0;
    summary.t_window = result.trajectory->t_end();
    if (result.blowup) summary.t_window = std::min(summary.t_window, kPreBreakdownFraction * result.blowup->t_detect);

    for (Family family : {Family::One, Family::Two}) {
        for (double r0 : audit_origins(result.grid, n)) {
            const CharacteristicPath path = truncated(advance_flow_map(family, r0, *result.trajectory), summary.t_window);
            if (path.samples.size() < 2) continue;
            for (const TransitionEvent& e : transition_events(path)) summary.events.push_back(e);
        }
    }
    summary.audit = audit_transitions(summary.events);
    return summary;
}

}  // namespace

SimulationResult simulate(const CaseConfig& config, const SimulationOptions& options) {
    config.validate();
    SimulationResult result{config, config.grid.make(), {}, {}, {}, {}, {}, {}, {}};
    const RadialGrid& grid = result.grid;
    const GasModel& model = config.model;
    result.initial = initial_field(config, grid);
    result.targets = snapshot_targets(config.t_end, config.snapshots);

    std::vector<Observer> observers;
    std::size_t next_target = 0;
    observers.push_back([&](const StepView& v) -> std::optional<Event> {
        if (next_target < result.targets.size() && v.time >= result.targets[next_target]) {
            result.snapshots.push_back(make_record(v.time, v.primitives, grid, model));
            while (next_target < result.targets.size() && result.targets[next_target] <= v.time) ++next_target;
        }
        return std::nullopt;
    });

    auto detector = std::make_shared<BlowupDetector>(grid, config.diagnostics.blowup_factor);
    observers.push_back([&, detector](const StepView& v) -> std::optional<Event> {
        auto report = detector->observe(v.time, v.dt, v.clipped, v.primitives);
        if (!report) return std::nullopt;
        result.blowup = *report;
        return Event{v.time, EventKind::BlowupDetected, report->cell,
                     std::string("trigger ") + std::string(to_string(report->trigger))};
    });

    if (options.record_trajectory) {
        result.trajectory.emplace(grid);
        observers.push_back(make_strided_recorder(*result.trajectory, model, trajectory_frame_cap(config), config.t_end));
    }
    for (const Observer& o : options.extra_observers) observers.push_back(o);

    result.run = advance(conserved_from_primitives(result.initial, grid, model), grid, model, config.params,
                         config.bc, config.t_end, observers, options.advance);

    const Event& terminal = result.run.terminal();
    if (!result.blowup && (terminal.kind == EventKind::PositivityFailure || terminal.kind == EventKind::NonFinite))
        result.blowup = BlowupReport{true, terminal.time, terminal.cell.value_or(0), trigger_for(terminal.kind)};
    if (terminal.kind == EventKind::BlowupDetected &&
        (result.snapshots.empty() || result.snapshots.back().time < result.run.time))
        result.snapshots.push_back(make_record(result.run.time, result.run.primitives, grid, model));

    if (options.run_audit) result.audit = run_audit(result);
    return result;
}

std::string_view to_string(RunStatus status) {
    switch (status) {
        case RunStatus::Completed: return "completed";
        case RunStatus::Blowup: return "blowup";
        case RunStatus::Error: return "error";
    }
    return "error";
}

RunStatus status_of(EventKind terminal) {
    switch (terminal) {
        case EventKind::Completed: return RunStatus::Completed;
        case EventKind::BlowupDetected:
        case EventKind::PositivityFailure:
        case EventKind::NonFinite: return RunStatus::Blowup;
        case EventKind::StepLimit: return RunStatus::Error;
    }
    return RunStatus::Error;
}

void ensure_writable_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    if (!fs::is_directory(dir)) throw IoError("output path '" + dir.string() + "' is not a directory");
    const fs::path probe = dir / ".rsdle_write_probe";
    write_text(probe, "probe\n");
    fs::remove(probe, ec);
}

namespace {

bool is_artifact_name(const std::string& name) {
    auto starts = [&](std::string_view p) { return name.rfind(p, 0) == 0; };
    auto ends = [&](std::string_view s) {
        return name.size() >= s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0;
    };
    if (name == kManifestName || name == "events.csv" || name == "transitions.csv") return true;
    return ends(".csv") && (starts("snapshot_") || starts("curve_") || starts("heatmap_"));
}

std::string indexed(std::string_view stem, std::size_t k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*s_%04zu.csv", static_cast<int>(stem.size()), stem.data(), k);
    return buf;
}

std::string csv_field(std::string text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

void write_events(const fs::path& path, const std::vector<Event>& events) {
    std::string out = "time,kind,cell,detail\n";
    for (const Event& e : events) {
        out += format_number(e.time) + "," + std::string(to_string(e.kind)) + ",";
        if (e.cell) out += std::to_string(*e.cell);
        out += "," + csv_field(e.detail) + "\n";
    }
    write_text(path, out);
}

std::string_view verdict(const TransitionEvent& e) {
    if (e.mixed || e.regime == RegimeClass::Degenerate || e.partner_sign == 0) return "unjudged";
    const auto allowed = allowed_direction(e.regime, e.family, e.partner_sign);
    return allowed && *allowed == e.direction ? "ok" : "violation";
}

void write_transitions(const fs::path& path, const std::vector<TransitionEvent>& events) {
    std::string out = "family,t_event,r_event,direction,partner_sign,regime,mixed,verdict\n";
    for (const TransitionEvent& e : events) {
        out += std::string(to_string(e.family)) + "," + format_number(e.t_event) + "," + format_number(e.r_event) +
               "," + std::string(to_string(e.direction)) + "," + std::to_string(e.partner_sign) + "," +
               std::string(to_string(e.regime)) + "," + (e.mixed ? "1" : "0") + "," + std::string(verdict(e)) + "\n";
    }
    write_text(path, out);
}

Json config_json(const CaseConfig& config) {
    Json j = Json::object();
    const std::string text = format_config(config);
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string line = text.substr(pos, nl - pos);
        pos = nl == std::string::npos ? text.size() : nl + 1;
        const std::size_t eq = line.find(" = ");
        if (line.empty() || line[0] == '#' || eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 3);
        char* end = nullptr;
        const double number = std::strtod(value.c_str(), &end);
        if (!value.empty() && end == value.c_str() + value.size() && std::isfinite(number))
            j[key] = number;
        else
            j[key] = value;
    }
    return j;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::vector<fs::path> run_artifacts(const fs::path& dir) {
    std::vector<fs::path> found;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec))
        if (entry.is_regular_file() && is_artifact_name(entry.path().filename().string())) found.push_back(entry.path());
    std::sort(found.begin(), found.end());
    return found;
}

RunOutcome run_case(const CaseConfig& config, const fs::path& output_dir, const RunOptions& options) {
    ensure_writable_directory(output_dir);
    for (const fs::path& old : run_artifacts(output_dir)) fs::remove(old);

    RunOutcome outcome;
    outcome.output_dir = output_dir;
    const auto started = std::chrono::steady_clock::now();

    Json manifest;
    manifest["format"] = kManifestFormat;
    manifest["case_id"] = config.case_id;
    manifest["config"] = config_json(config);
    manifest["numeric_format"] = kNumberFormat;
    manifest["line_ending"] = "LF";

    std::vector<std::string> files;
    try {
        outcome.result = simulate(config, options.simulation);
    } catch (const Error& e) {
        outcome.status = RunStatus::Error;
        outcome.error = e.what();
    }

    if (outcome.result) {
        const SimulationResult& r = *outcome.result;
        outcome.status = status_of(r.run.terminal().kind);
        const std::vector<double> radii(r.grid.centers().begin(), r.grid.centers().end());
        std::vector<double> times;
        std::vector<std::vector<double>> alpha_rows, beta_rows;
        for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
            const SnapshotRecord& s = r.snapshots[k];
            files.push_back(indexed("snapshot", k));
            write_snapshot(output_dir / files.back(), r.grid, s.field, s.gradients);
            files.push_back(indexed("curve", k));
            write_curve(output_dir / files.back(), invariant_curve(s.field));
            times.push_back(s.time);
            alpha_rows.push_back(s.gradients.alpha);
            beta_rows.push_back(s.gradients.beta);
        }
        files.push_back("heatmap_alpha.csv");
        write_heatmap(output_dir / files.back(), heatmap_accumulate(alpha_rows), times, radii);
        files.push_back("heatmap_beta.csv");
        write_heatmap(output_dir / files.back(), heatmap_accumulate(beta_rows), times, radii);
        files.push_back("events.csv");
        write_events(output_dir / files.back(), r.run.events);
        files.push_back("transitions.csv");
        write_transitions(output_dir / files.back(), r.audit.events);

        const Event& terminal = r.run.terminal();
        manifest["status"] = to_string(outcome.status);
        manifest["terminal_event"] = {{"kind", to_string(terminal.kind)},
                                      {"time", terminal.time},
                                      {"cell", terminal.cell ? Json(*terminal.cell) : Json(nullptr)},
                                      {"detail", terminal.detail}};
        manifest["steps"] = r.run.steps;
        manifest["final_time"] = r.run.time;
        manifest["density_floor"] = r.run.density_floor;
        if (r.blowup) {
            manifest["blowup"] = {{"t_detect", r.blowup->t_detect},
                                  {"cell", r.blowup->cell},
                                  {"radius", r.grid.center(std::min(r.blowup->cell, r.grid.size() - 1))},
                                  {"trigger", to_string(r.blowup->trigger)}};
        } else {
            manifest["blowup"] = nullptr;
        }
        manifest["snapshot_times"] = times;
        if (r.audit.ran()) {
            manifest["audit"] = {{"paths_per_family", r.audit.paths_per_family},
                                 {"t_window", number_or_null(r.audit.t_window)},
                                 {"events", r.audit.events.size()},
                                 {"judged", r.audit.audit.judged},
                                 {"unjudged", r.audit.audit.unjudged},
                                 {"violations", r.audit.audit.violations.size()},
                                 {"heuristic", r.audit.heuristic}};
        } else {
            manifest["audit"] = nullptr;
        }
    } else {
        manifest["status"] = to_string(outcome.status);
        manifest["error"] = outcome.error;
    }

    Json listed = Json::array();
    std::sort(files.begin(), files.end());
    for (const std::string& name : files) {
        const fs::path p = output_dir / name;
        listed.push_back({{"name", name}, {"bytes", fs::file_size(p)}, {"sha256", sha256_file(p)}});
    }
    manifest["files"] = std::move(listed);
    if (options.record_timings) {
        const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - started;
        manifest["timings"] = {{"wall_seconds", wall.count()}};
    }
    write_text(output_dir / kManifestName, manifest.dump(2) + "\n");
    return outcome;
}

}  // namespace rsdle
