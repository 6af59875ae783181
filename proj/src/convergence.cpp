#include "rsdle/convergence.hpp"

#include <cmath>
#include <future>
#include <limits>

#include "rsdle/csv_io.hpp"
#include "rsdle/error.hpp"
#include "rsdle/run.hpp"

namespace rsdle {

std::vector<double> restrict_average(std::span<const double> fine, std::size_t coarse_cells) {
    if (coarse_cells == 0 || fine.size() % coarse_cells != 0)
        throw ShapeError("restrict_average: fine cell count must be a multiple of the coarse count");
    const std::size_t block = fine.size() / coarse_cells;
    std::vector<double> out(coarse_cells);
    for (std::size_t i = 0; i < coarse_cells; ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k < block; ++k) sum += fine[i * block + k];
        out[i] = sum / static_cast<double>(block);
    }
    return out;
}

double l1_distance(std::span<const double> a, std::span<const double> b, double dr) {
    if (a.size() != b.size()) throw ShapeError("l1_distance: sizes differ");
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) sum += std::abs(a[j] - b[j]);
    return dr * sum;
}

double observed_order(double e_coarse, double e_fine, double ratio) {
    return std::log(e_coarse / e_fine) / std::log(ratio);
}

std::vector<ConvergenceRow> ConvergenceStudy::field_rows(const std::string& field) const {
    std::vector<ConvergenceRow> out;
    for (const ConvergenceRow& row : rows)
        if (row.field == field) out.push_back(row);
    return out;
}

namespace {

double l1_norm(std::span<const double> v, double dr) {
    double sum = 0.0;
    for (double x : v) sum += std::abs(x);
    return dr * sum;
}

}  // namespace

void validate_meshes(std::span<const std::size_t> meshes) {
    if (meshes.size() < 2) throw DomainError("convergence_study: need at least two meshes");
    for (std::size_t k = 1; k < meshes.size(); ++k)
        if (meshes[k] <= meshes[k - 1] || meshes[k] % meshes[k - 1] != 0)
            throw DomainError("convergence_study: each mesh must be a proper multiple of the previous one");
}

ConvergenceStudy convergence_study(const CaseConfig& base, std::span<const std::size_t> meshes) {
    validate_meshes(meshes);

    std::vector<std::future<SimulationResult>> jobs;
    for (std::size_t cells : meshes) {
        CaseConfig c = base;
        c.grid.cells = cells;
        c.snapshots = kMinSnapshots;
        jobs.push_back(std::async(std::launch::async, [c] {
            SimulationOptions opts;
            opts.record_trajectory = false;
            opts.run_audit = false;
            return simulate(c, opts);
        }));
    }
    std::vector<SimulationResult> runs;
    for (auto& job : jobs) runs.push_back(job.get());
    for (const SimulationResult& r : runs) {
        const Event& terminal = r.run.terminal();
        if (terminal.kind != EventKind::Completed)
            throw ConvergenceAborted(r.grid.size(), terminal.time,
                                     std::string(to_string(terminal.kind)) + " (" + terminal.detail + ")");
    }

    ConvergenceStudy study;
    study.meshes.assign(meshes.begin(), meshes.end());
    for (const char* field : {"rho", "u"}) {
        const auto values = [&](const SimulationResult& r) -> const std::vector<double>& {
            return std::string_view(field) == "rho" ? r.run.primitives.rho : r.run.primitives.u;
        };
        std::optional<double> previous;
        bool previous_exact = false;
        for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
            const std::size_t coarse = meshes[k], fine = meshes[k + 1];
            const double dr = runs[k].grid.dr();
            const std::vector<double>& u_coarse = values(runs[k]);
            const double e = l1_distance(u_coarse, restrict_average(values(runs[k + 1]), coarse), dr);
            const double scale = std::max(l1_norm(u_coarse, dr), std::numeric_limits<double>::min());
            const bool exact = e <= kRoundoffLevel * scale;

            ConvergenceRow row{field, coarse, fine, e, std::nullopt, exact || previous_exact};
            if (previous && !row.exact)
                row.order = observed_order(*previous, e, static_cast<double>(fine) / static_cast<double>(coarse));
            study.rows.push_back(row);
            previous = e;
            previous_exact = exact;
        }
    }
    return study;
}

std::string format_convergence_csv(const ConvergenceStudy& study) {
    std::string out = "field,coarse,fine,l1_error,order\n";
    for (const ConvergenceRow& row : study.rows) {
        out += row.field + "," + std::to_string(row.coarse) + "," + std::to_string(row.fine) + "," +
               format_number(row.l1_error) + ",";
        if (row.exact)
            out += "exact";
        else if (row.order)
            out += format_number(*row.order);
        out += "\n";
    }
    return out;
}

void write_convergence_csv(const std::filesystem::path& path, const ConvergenceStudy& study) {
    write_text(path, format_convergence_csv(study));
}

}  // namespace rsdle
