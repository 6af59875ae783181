#include "rsdle/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "rsdle/error.hpp"

namespace rsdle {

namespace {

/// Case 3 phase origin and the sea-level scaling shared by cases 4 to 7.
constexpr double kCase3Left = 10.0;
constexpr double kSeaLevelK = 7.75e4;
constexpr double kAirGamma = 1.4;

CaseConfig base_case(std::string id, bool paper_scale) {
    CaseConfig c;
    c.case_id = std::move(id);
    c.grid.cells = paper_scale ? kPaperScaleCells : kDeskScaleCells;
    return c;
}

CaseConfig prescribed_case(std::string id, bool paper_scale, double K, double gamma, double inner, double outer,
                           double alpha, double beta, double v_a, double h_c, double t_end) {
    CaseConfig c = base_case(std::move(id), paper_scale);
    c.model = {K, gamma, 1};
    c.grid.inner = inner;
    c.grid.outer = outer;
    c.bc = BoundaryCondition::NeumannZeroGradient;
    c.ic = PrescribedCharacterIC{alpha, beta, v_a, h_c, inner};
    c.t_end = t_end;
    return c;
}

CaseConfig sinusoidal_case(std::string id, bool paper_scale, double eps) {
    CaseConfig c = base_case(std::move(id), paper_scale);
    c.model = {1.0, 3.0, 1};
    c.grid.inner = kCase3Left;
    c.grid.outer = kCase3Left + 2.0 * std::numbers::pi;
    c.bc = BoundaryCondition::Periodic;
    c.ic = SinusoidalIC{eps, 5.0, kCase3Left};
    c.t_end = 10.0;
    return c;
}

const std::vector<std::string>& ids() {
    static const std::vector<std::string> list{"case1", "case2", "case3_eps10", "case3_eps1", "case3_eps0.1",
                                               "case4", "case5",  "case6",       "case7"};
    return list;
}

std::string join_ids() {
    std::string out;
    for (const auto& id : ids()) {
        if (!out.empty()) out += ", ";
        out += id;
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    std::size_t line = 0;
};

class Fields {
public:
    explicit Fields(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    std::size_t line(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    const Entry& require(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
        return it->second;
    }

    double number(const std::string& key) const { return parse_number(key, require(key)); }
    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    std::size_t count(const std::string& key) const { return parse_count(key, require(key)); }
    std::size_t count_or(const std::string& key, std::size_t fallback) const {
        return has(key) ? count(key) : fallback;
    }

    std::string text_or(const std::string& key, std::string fallback) const {
        return has(key) ? require(key).value : fallback;
    }

    template <class E>
    E choice(const std::string& key, const std::vector<std::pair<std::string_view, E>>& options,
             std::optional<E> fallback = std::nullopt) const {
        if (!has(key)) {
            if (fallback) return *fallback;
            require(key);
        }
        const Entry& e = require(key);
        std::string allowed;
        for (const auto& [name, value] : options) {
            if (e.value == name) return value;
            allowed += allowed.empty() ? "" : ", ";
            allowed += name;
        }
        throw ConfigError(e.line, "'" + key + "' must be one of: " + allowed);
    }

    void check(bool ok, const std::string& key, const std::string& message) const {
        if (!ok) throw ConfigError(line(key), message);
    }

private:
    static double parse_number(const std::string& key, const Entry& e) {
        double v = 0.0;
        const char* begin = e.value.data();
        const char* end = begin + e.value.size();
        const auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v))
            throw ConfigError(e.line, "'" + key + "' expects a finite number, got '" + e.value + "'");
        return v;
    }

    static std::size_t parse_count(const std::string& key, const Entry& e) {
        std::size_t v = 0;
        const char* begin = e.value.data();
        const char* end = begin + e.value.size();
        const auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || ptr != end)
            throw ConfigError(e.line, "'" + key + "' expects a nonnegative integer, got '" + e.value + "'");
        return v;
    }

    std::map<std::string, Entry> entries_;
};

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys{
        "case_id", "m",       "K",        "gamma",        "r_inner",     "r_outer",
        "cells",   "bc",      "ic",       "alpha0",       "beta0",       "v_a",
        "h_c",     "r0",      "eps",      "rho_const",    "r_left",      "t_end",
        "snapshots", "varrho", "theta",   "zeta1",        "zeta2",       "courant",
        "cfl_speed", "integrator", "dissipation", "density_floor_relative", "blowup_factor",
        "audit_paths", "trajectory_frames", "output_dir"};
    return keys;
}

}  // namespace

void CaseConfig::validate() const {
    try {
        model.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (model.m != 1 && model.m != 2) throw ConfigError("m must be 1 or 2");
    if (!(grid.inner >= 0.0 && grid.inner < grid.outer) || !std::isfinite(grid.outer))
        throw ConfigError("grid needs 0 <= r_inner < r_outer");
    if (grid.cells < kMinCells) throw ConfigError("cells must be at least 16");
    if (snapshots < kMinSnapshots) throw ConfigError("snapshots must be at least 2");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be finite and nonnegative");
    if (!(diagnostics.blowup_factor > 1.0)) throw ConfigError("blowup_factor must exceed 1");
    if (diagnostics.trajectory_frames < 4) throw ConfigError("trajectory_frames must be at least 4");
    params.validate();
    if (const auto* p = std::get_if<PrescribedCharacterIC>(&ic)) {
        if (!(p->r0 >= grid.inner && p->r0 <= grid.outer)) throw ConfigError("r0 must lie within the grid");
        if (!(p->r0 > 0.0)) throw ConfigError("r0 must be positive");
        if (!(p->h_c >= 0.0)) throw ConfigError("h_c must be nonnegative");
    } else {
        const auto& s = std::get<SinusoidalIC>(ic);
        if (s.eps == 0.0) throw ConfigError("eps must be nonzero");
        if (!(s.rho_const > 0.0)) throw ConfigError("rho_const must be positive");
    }
}

std::vector<std::string> builtin_case_ids() { return ids(); }

CaseConfig builtin_case(std::string_view id, bool paper_scale) {
    if (id == "case1") return prescribed_case("case1", paper_scale, kSeaLevelK, kAirGamma, 10.0, 20.0, -3.0, -3.0, 10.0, 1.0, 10.0);
    if (id == "case2") return prescribed_case("case2", paper_scale, kSeaLevelK, kAirGamma, 10.0, 20.0, 3.0, 3.0, 10.0, 1.0, 10.0);
    if (id == "case3_eps10") return sinusoidal_case("case3_eps10", paper_scale, 10.0);
    if (id == "case3_eps1") return sinusoidal_case("case3_eps1", paper_scale, 1.0);
    if (id == "case3_eps0.1") return sinusoidal_case("case3_eps0.1", paper_scale, 0.1);
    if (id == "case4") return prescribed_case("case4", paper_scale, kSeaLevelK, kAirGamma, 1.0, 5.0, -1300.0, -1300.0, 3400.0, 343.0, 1e-3);
    if (id == "case5") return prescribed_case("case5", paper_scale, kSeaLevelK, kAirGamma, 1.0, 5.0, 1300.0, 1300.0, 3400.0, 343.0, 1e-3);
    if (id == "case6") return prescribed_case("case6", paper_scale, kSeaLevelK, kAirGamma, 1.0, 5.0, 1300.0, -1300.0, -3400.0, 343.0, 1e-3);
    if (id == "case7") return prescribed_case("case7", paper_scale, kSeaLevelK, kAirGamma, 1.0, 5.0, 1300.0, 1300.0, -3400.0, 343.0, 1e-3);
    throw LookupError("unknown case '" + std::string(id) + "'; valid ids: " + join_ids());
}

CaseConfig parse_config(std::string_view text) {
    std::map<std::string, Entry> entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError(line_no, "empty key");
        if (value.empty()) throw ConfigError(line_no, "empty value for '" + key + "'");
        const auto& keys = known_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(line_no, "unknown key '" + key + "'");
        if (const auto it = entries.find(key); it != entries.end())
            throw ConfigError(line_no, "duplicate key '" + key + "' (first set on line " +
                                           std::to_string(it->second.line) + ")");
        entries.emplace(key, Entry{value, line_no});
    }

    const Fields f(std::move(entries));
    CaseConfig c;
    c.case_id = f.text_or("case_id", "custom");

    const double m = f.number("m");
    f.check(m == 1.0 || m == 2.0, "m", "m must be 1 or 2");
    c.model.m = static_cast<int>(m);
    c.model.K = f.number("K");
    f.check(c.model.K > 0.0, "K", "K must be positive");
    c.model.gamma = f.number("gamma");
    f.check(c.model.gamma > 1.0, "gamma", "gamma must exceed 1");

    c.grid.inner = f.number("r_inner");
    c.grid.outer = f.number("r_outer");
    f.check(c.grid.inner >= 0.0, "r_inner", "r_inner must be nonnegative");
    f.check(c.grid.inner < c.grid.outer, "r_outer", "r_outer must exceed r_inner");
    c.grid.cells = f.count("cells");
    f.check(c.grid.cells >= kMinCells, "cells", "cells must be at least 16");

    c.bc = f.choice<BoundaryCondition>("bc", {{"neumann", BoundaryCondition::NeumannZeroGradient},
                                              {"periodic", BoundaryCondition::Periodic}});

    enum class IcKind { Prescribed, Sinusoidal };
    const IcKind kind = f.choice<IcKind>("ic", {{"prescribed", IcKind::Prescribed}, {"sinusoidal", IcKind::Sinusoidal}});
    const std::vector<std::string> prescribed_keys{"alpha0", "beta0", "v_a", "h_c", "r0"};
    const std::vector<std::string> sinusoidal_keys{"eps", "rho_const", "r_left"};
    const auto& foreign = kind == IcKind::Prescribed ? sinusoidal_keys : prescribed_keys;
    for (const auto& key : foreign)
        f.check(!f.has(key), key, "'" + key + "' does not apply to ic = " + f.require("ic").value);
    if (kind == IcKind::Prescribed) {
        PrescribedCharacterIC p;
        p.alpha0 = f.number("alpha0");
        p.beta0 = f.number("beta0");
        p.v_a = f.number("v_a");
        p.h_c = f.number("h_c");
        f.check(p.h_c >= 0.0, "h_c", "h_c must be nonnegative");
        p.r0 = f.number_or("r0", c.grid.inner);
        f.check(p.r0 >= c.grid.inner && p.r0 <= c.grid.outer && p.r0 > 0.0, "r0", "r0 must lie within the grid");
        c.ic = p;
    } else {
        SinusoidalIC s;
        s.eps = f.number("eps");
        f.check(s.eps != 0.0, "eps", "eps must be nonzero");
        s.rho_const = f.number("rho_const");
        f.check(s.rho_const > 0.0, "rho_const", "rho_const must be positive");
        s.r_left = f.number_or("r_left", c.grid.inner);
        c.ic = s;
    }

    c.t_end = f.number("t_end");
    f.check(c.t_end >= 0.0, "t_end", "t_end must be nonnegative");
    c.snapshots = f.count_or("snapshots", c.snapshots);
    f.check(c.snapshots >= kMinSnapshots, "snapshots", "snapshots must be at least 2");

    SchemeParams& p = c.params;
    p.varrho = f.number_or("varrho", p.varrho);
    f.check(p.varrho > 0.0, "varrho", "varrho must be positive");
    p.theta = f.number_or("theta", p.theta);
    f.check(p.theta >= 1.0 && p.theta <= 2.0, "theta", "theta must satisfy 1 <= theta <= 2");
    p.zeta1 = f.number_or("zeta1", p.zeta1);
    p.zeta2 = f.number_or("zeta2", p.zeta2);
    p.courant = f.number_or("courant", p.courant);
    f.check(p.courant > 0.0 && p.courant < 0.5, "courant", "courant must satisfy 0 < courant < 1/2 (strict < 1/2)");
    p.cfl_speed = f.choice<CflSpeed>("cfl_speed", {{"characteristic", CflSpeed::Characteristic},
                                                   {"advective", CflSpeed::Advective}},
                                     p.cfl_speed);
    p.integrator = f.choice<TimeIntegrator>("integrator", {{"ssp_rk2", TimeIntegrator::SspRk2},
                                                           {"ssp_rk3", TimeIntegrator::SspRk3}},
                                            p.integrator);
    p.dissipation = f.choice<DissipationMode>("dissipation", {{"global", DissipationMode::Global},
                                                              {"local", DissipationMode::Local}},
                                              p.dissipation);
    p.density_floor_relative = f.number_or("density_floor_relative", p.density_floor_relative);
    f.check(p.density_floor_relative >= 0.0 && p.density_floor_relative < 1.0, "density_floor_relative",
            "density_floor_relative must lie in [0, 1)");

    c.diagnostics.blowup_factor = f.number_or("blowup_factor", c.diagnostics.blowup_factor);
    f.check(c.diagnostics.blowup_factor > 1.0, "blowup_factor", "blowup_factor must exceed 1");
    c.diagnostics.audit_paths = f.count_or("audit_paths", c.diagnostics.audit_paths);
    c.diagnostics.trajectory_frames = f.count_or("trajectory_frames", c.diagnostics.trajectory_frames);
    f.check(c.diagnostics.trajectory_frames >= 4, "trajectory_frames", "trajectory_frames must be at least 4");
    c.output_dir = f.text_or("output_dir", "");

    c.validate();
    return c;
}

CaseConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(e.line(), path.string() + ": " + e.what());
    }
}

std::string format_config(const CaseConfig& c) {
    std::ostringstream out;
    auto put = [&out](std::string_view key, const std::string& value) { out << key << " = " << value << '\n'; };
    auto num = [&](std::string_view key, double v) { put(key, format_double(v)); };

    put("case_id", c.case_id);
    put("m", std::to_string(c.model.m));
    num("K", c.model.K);
    num("gamma", c.model.gamma);
    num("r_inner", c.grid.inner);
    num("r_outer", c.grid.outer);
    put("cells", std::to_string(c.grid.cells));
    put("bc", std::string(to_string(c.bc)));
    if (const auto* p = std::get_if<PrescribedCharacterIC>(&c.ic)) {
        put("ic", "prescribed");
        num("alpha0", p->alpha0);
        num("beta0", p->beta0);
        num("v_a", p->v_a);
        num("h_c", p->h_c);
        num("r0", p->r0);
    } else {
        const auto& s = std::get<SinusoidalIC>(c.ic);
        put("ic", "sinusoidal");
        num("eps", s.eps);
        num("rho_const", s.rho_const);
        num("r_left", s.r_left);
    }
    num("t_end", c.t_end);
    put("snapshots", std::to_string(c.snapshots));
    num("varrho", c.params.varrho);
    num("theta", c.params.theta);
    num("zeta1", c.params.zeta1);
    num("zeta2", c.params.zeta2);
    num("courant", c.params.courant);
    put("cfl_speed", std::string(to_string(c.params.cfl_speed)));
    put("integrator", std::string(to_string(c.params.integrator)));
    put("dissipation", std::string(to_string(c.params.dissipation)));
    num("density_floor_relative", c.params.density_floor_relative);
    num("blowup_factor", c.diagnostics.blowup_factor);
    put("audit_paths", std::to_string(c.diagnostics.audit_paths));
    put("trajectory_frames", std::to_string(c.diagnostics.trajectory_frames));
    if (!c.output_dir.empty()) put("output_dir", c.output_dir);
    return out.str();
}

CaseConfig resolve_case(std::string_view id_or_path, bool paper_scale) {
    const auto& list = ids();
    if (std::find(list.begin(), list.end(), id_or_path) != list.end()) return builtin_case(id_or_path, paper_scale);
    const std::filesystem::path path{std::string(id_or_path)};
    if (!std::filesystem::exists(path))
        throw LookupError("'" + std::string(id_or_path) + "' is neither a builtin case (" + join_ids() +
                          ") nor a config file");
    CaseConfig c = load_config(path);
    if (paper_scale) c.grid.cells = kPaperScaleCells;
    return c;
}

PrimitiveField initial_field(const CaseConfig& config, const RadialGrid& grid) {
    if (const auto* p = std::get_if<PrescribedCharacterIC>(&config.ic))
        return synthesize_profiles(*p, grid, config.model);
    return sinusoidal_profiles(std::get<SinusoidalIC>(config.ic), grid, config.model);
}

}  // namespace rsdle
