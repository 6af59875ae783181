#include "rsdle/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <utility>

#include "rsdle/error.hpp"

namespace rsdle {

std::string_view to_string(Family family) {
    return family == Family::One ? "1" : "2";
}

std::string_view to_string(TransitionDirection direction) {
    return direction == TransitionDirection::RtoC ? "R->C" : "C->R";
}

FieldTrajectory::FieldTrajectory(RadialGrid grid) : grid_(std::move(grid)) {}

void FieldTrajectory::add_frame(double time, const PrimitiveField& field, const GradientField& gradients) {
    const std::size_t n = field.size();
    std::vector<double> c1(n), c2(n);
    for (std::size_t j = 0; j < n; ++j) {
        const SpeedPair speeds = characteristic_speeds(field.u[j], field.h[j]);
        c1[j] = speeds.c1;
        c2[j] = speeds.c2;
    }
    add_frame(time, std::move(c1), std::move(c2), gradients.alpha, gradients.beta);
}

void FieldTrajectory::add_frame(double time, std::vector<double> c1, std::vector<double> c2,
                                std::vector<double> alpha, std::vector<double> beta) {
    const std::size_t n = grid_.size();
    if (c1.size() != n || c2.size() != n || alpha.size() != n || beta.size() != n)
        throw ShapeError("FieldTrajectory: frame size does not match the grid");
    if (!times_.empty() && !(time > times_.back()))
        throw DomainError("FieldTrajectory: frame times must increase");
    times_.push_back(time);
    data_.push_back({std::move(c1), std::move(c2), std::move(alpha), std::move(beta)});
}

FieldSample FieldTrajectory::sample_frame(std::size_t frame, double r) const {
    const Frame& f = data_.at(frame);
    const std::size_t n = grid_.size();
    if (n == 1) return {f.c1[0], f.c2[0], f.alpha[0], f.beta[0]};
    const double x = std::clamp((r - grid_.center(0)) / grid_.dr(), 0.0, static_cast<double>(n - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(x), n - 2);
    const double w = x - static_cast<double>(i);
    auto lerp = [&](const std::vector<double>& v) { return (1.0 - w) * v[i] + w * v[i + 1]; };
    return {lerp(f.c1), lerp(f.c2), lerp(f.alpha), lerp(f.beta)};
}

FieldSample FieldTrajectory::sample(double time, double r) const {
    if (times_.empty()) throw DomainError("FieldTrajectory: no frames");
    if (times_.size() == 1 || time <= times_.front()) return sample_frame(0, r);
    if (time >= times_.back()) return sample_frame(times_.size() - 1, r);
    const auto it = std::upper_bound(times_.begin(), times_.end(), time);
    const std::size_t k = static_cast<std::size_t>(it - times_.begin());
    const double w = (time - times_[k - 1]) / (times_[k] - times_[k - 1]);
    const FieldSample a = sample_frame(k - 1, r);
    const FieldSample b = sample_frame(k, r);
    auto mix = [w](double x, double y) { return (1.0 - w) * x + w * y; };
    return {mix(a.c1, b.c1), mix(a.c2, b.c2), mix(a.alpha, b.alpha), mix(a.beta, b.beta)};
}

void FieldTrajectory::decimate() {
    std::size_t keep = 0;
    for (std::size_t k = 0; k < times_.size(); k += 2, ++keep) {
        if (keep == k) continue;
        times_[keep] = times_[k];
        data_[keep] = std::move(data_[k]);
    }
    times_.resize(keep);
    data_.resize(keep);
}

Observer make_trajectory_recorder(FieldTrajectory& trajectory, const GasModel& model,
                                  double min_spacing, double horizon) {
    return [&trajectory, model, min_spacing, horizon](const StepView& view) -> std::optional<Event> {
        if (view.time > horizon) return std::nullopt;
        const bool first = trajectory.frames() == 0;
        if (first || view.clipped || view.time - trajectory.t_end() >= min_spacing) {
            if (first || view.time > trajectory.t_end()) {
                const GradientField g = gradient_variables_masked(view.primitives, trajectory.grid(), model);
                trajectory.add_frame(view.time, view.primitives, g);
            }
        }
        return std::nullopt;
    };
}

Observer make_strided_recorder(FieldTrajectory& trajectory, const GasModel& model,
                               std::size_t max_frames, double horizon) {
    if (max_frames < 4) throw DomainError("make_strided_recorder: need room for at least 4 frames");
    struct Stride {
        std::size_t every = 1;
    };
    auto stride = std::make_shared<Stride>();
    return [&trajectory, model, max_frames, horizon, stride](const StepView& view) -> std::optional<Event> {
        if (view.time > horizon) return std::nullopt;
        if (view.step % stride->every != 0 && !view.clipped) return std::nullopt;
        if (trajectory.frames() > 0 && !(view.time > trajectory.t_end())) return std::nullopt;
        const GradientField g = gradient_variables_masked(view.primitives, trajectory.grid(), model);
        trajectory.add_frame(view.time, view.primitives, g);
        if (trajectory.frames() >= max_frames) {
            trajectory.decimate();
            stride->every *= 2;
        }
        return std::nullopt;
    };
}

namespace {

double own_speed(Family family, const FieldSample& s) {
    return family == Family::One ? s.c1 : s.c2;
}

PathSample make_sample(Family family, double t, double r, const FieldSample& s) {
    PathSample out;
    out.t = t;
    out.r = r;
    out.c1 = s.c1;
    out.c2 = s.c2;
    if (family == Family::One) {
        out.c_own = s.c1;
        out.gvar = s.beta;
        out.partner = s.alpha;
    } else {
        out.c_own = s.c2;
        out.gvar = s.alpha;
        out.partner = s.beta;
    }
    return out;
}

}  // namespace

CharacteristicPath advance_flow_map(Family family, double r_origin, const FieldTrajectory& trajectory) {
    const RadialGrid& grid = trajectory.grid();
    if (!(r_origin >= grid.inner() && r_origin <= grid.outer()))
        throw DomainError("advance_flow_map: origin outside the grid");
    if (trajectory.frames() == 0) throw DomainError("advance_flow_map: empty trajectory");

    CharacteristicPath path;
    path.family = family;
    path.r_origin = r_origin;
    const auto times = trajectory.times();
    double r = r_origin;
    path.samples.push_back(make_sample(family, times[0], r, trajectory.sample_frame(0, r)));

    auto speed = [&](double t, double x) { return own_speed(family, trajectory.sample(t, x)); };
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double t0 = times[k - 1];
        const double span = times[k] - t0;
        const double c0 = std::abs(speed(t0, r));
        const int sub = std::max(1, static_cast<int>(std::ceil(c0 * span / grid.dr())));
        const double dt = span / sub;
        double t = t0;
        for (int i = 0; i < sub; ++i) {
            const double k1 = speed(t, r);
            const double k2 = speed(t + 0.5 * dt, r + 0.5 * dt * k1);
            const double k3 = speed(t + 0.5 * dt, r + 0.5 * dt * k2);
            const double k4 = speed(t + dt, r + dt * k3);
            r += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t = (i + 1 == sub) ? times[k] : t + dt;
        }
        if (r < grid.inner()) {
            path.exit = PathExit::Inner;
            break;
        }
        if (r > grid.outer()) {
            path.exit = PathExit::Outer;
            break;
        }
        path.samples.push_back(make_sample(family, times[k], r, trajectory.sample_frame(k, r)));
    }
    return path;
}

double RiccatiPrediction::at(double t) const {
    if (time.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (t <= time.front()) return predicted.front();
    if (t >= time.back()) return predicted.back();
    const auto it = std::upper_bound(time.begin(), time.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - time.begin());
    const double w = (t - time[k - 1]) / (time[k] - time[k - 1]);
    return (1.0 - w) * predicted[k - 1] + w * predicted[k];
}

double decoupled_riccati(double g0, double t) {
    return g0 / (1.0 + g0 * t);
}

RiccatiPrediction riccati_along_path(const CharacteristicPath& path, const GasModel& model) {
    model.validate();
    if (model.gamma != 3.0) throw UnsupportedGamma(model.gamma);
    if (path.samples.empty()) throw DomainError("riccati_along_path: empty path");

    const bool one = path.family == Family::One;
    const double m = static_cast<double>(model.m);

    // Coupling coefficient k and partner at each sample: g' = -g^2 + k (partner - g).
    const std::size_t n = path.samples.size();
    std::vector<double> coupling(n, 0.0);
    const double divisor0 = one ? path.samples[0].c1 : path.samples[0].c2;
    for (std::size_t i = 0; i < n; ++i) {
        const PathSample& s = path.samples[i];
        const double divisor = one ? s.c1 : s.c2;
        if (divisor == 0.0 || !std::isfinite(divisor) || std::signbit(divisor) != std::signbit(divisor0))
            throw SonicOnPath(s.t);
        if (m != 0.0) {
            const double numer = one ? s.c2 : s.c1;
            coupling[i] = m * numer * numer / (2.0 * s.r * divisor);
        }
    }

    auto rhs = [&](std::size_t i, double w, double g) {
        const double k = (1.0 - w) * coupling[i] + w * coupling[i + 1];
        double value = -g * g;
        if (k != 0.0) {
            const double partner = (1.0 - w) * path.samples[i].partner + w * path.samples[i + 1].partner;
            value += k * (partner - g);
        }
        return value;
    };

    RiccatiPrediction out;
    double g = path.samples[0].gvar;
    const double cap = kRiccatiDivergenceCap * std::max(1.0, std::abs(g));
    out.time.push_back(path.samples[0].t);
    out.predicted.push_back(g);

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double ta = path.samples[i].t;
        const double span = path.samples[i + 1].t - ta;
        const double kmax = std::max(std::abs(coupling[i]), std::abs(coupling[i + 1]));
        double s = 0.0;  // elapsed fraction of the interval, in time units
        while (s < span) {
            const double rate = std::abs(g) + kmax;
            double h = rate > 0.0 ? 2e-3 / rate : span;
            h = std::min(h, span - s);
            auto w = [&](double x) { return x / span; };
            const double k1 = rhs(i, w(s), g);
            const double k2 = rhs(i, w(s + 0.5 * h), g + 0.5 * h * k1);
            const double k3 = rhs(i, w(s + 0.5 * h), g + 0.5 * h * k2);
            const double k4 = rhs(i, w(s + h), g + h * k3);
            g += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            s += h;
            if (!std::isfinite(g) || std::abs(g) > cap) {
                out.divergence_time = ta + s;
                return out;
            }
        }
        out.time.push_back(path.samples[i + 1].t);
        out.predicted.push_back(g);
    }
    return out;
}

namespace {

double boundary_at(const CharacteristicPath& path, double t) {
    const auto& s = path.samples;
    if (t <= s.front().t) return s.front().r;
    if (t > s.back().t) {
        switch (path.exit) {
        case PathExit::Outer: return std::numeric_limits<double>::infinity();
        case PathExit::Inner: return -std::numeric_limits<double>::infinity();
        case PathExit::None: return s.back().r;
        }
    }
    const auto it = std::lower_bound(s.begin(), s.end(), t,
                                     [](const PathSample& a, double x) { return a.t < x; });
    const std::size_t k = static_cast<std::size_t>(it - s.begin());
    if (s[k].t == t) return s[k].r;
    const double w = (t - s[k - 1].t) / (s[k].t - s[k - 1].t);
    return (1.0 - w) * s[k - 1].r + w * s[k].r;
}

}  // namespace

double InfluenceDomain::left_at(double t) const { return boundary_at(left, t); }
double InfluenceDomain::right_at(double t) const { return boundary_at(right, t); }

bool InfluenceDomain::contains(double t, double r) const {
    if (t < t_begin || t > t_end) return false;
    if (t_max && t > *t_max) return false;
    return left_at(t) <= r && r <= right_at(t);
}

InfluenceDomain influence_domain(double a, double b, const FieldTrajectory& trajectory) {
    if (!(a < b)) throw DomainError("influence_domain: need a < b");
    InfluenceDomain d;
    d.left = advance_flow_map(Family::Two, a, trajectory);
    d.right = advance_flow_map(Family::One, b, trajectory);
    d.t_begin = trajectory.t_begin();
    d.t_end = trajectory.t_end();

    const std::size_t common = std::min(d.left.samples.size(), d.right.samples.size());
    double prev_gap = d.right.samples[0].r - d.left.samples[0].r;
    for (std::size_t k = 1; k < common; ++k) {
        const double gap = d.right.samples[k].r - d.left.samples[k].r;
        if (gap <= 0.0) {
            const double t0 = d.left.samples[k - 1].t;
            const double t1 = d.left.samples[k].t;
            d.t_max = t0 + (t1 - t0) * prev_gap / (prev_gap - gap);
            return d;
        }
        prev_gap = gap;
    }
    // A boundary that leaves through the far side closes the domain.
    if (d.left.exit == PathExit::Outer && d.left.samples.size() <= d.right.samples.size())
        d.t_max = d.left.samples.back().t;
    else if (d.right.exit == PathExit::Inner)
        d.t_max = d.right.samples.back().t;
    return d;
}

std::vector<TransitionEvent> transition_events(const CharacteristicPath& path, double field_scale) {
    const auto& s = path.samples;
    double scale = field_scale;
    double partner_scale = 0.0;
    for (const PathSample& x : s) {
        if (field_scale <= 0.0 && std::isfinite(x.gvar)) scale = std::max(scale, std::abs(x.gvar));
        if (std::isfinite(x.partner)) partner_scale = std::max(partner_scale, std::abs(x.partner));
    }
    const double tol = kTransitionSignTolerance * scale;
    const double partner_tol = kTransitionSignTolerance * std::max(partner_scale, scale);

    auto significant_sign = [tol](double v) -> int {
        if (!std::isfinite(v) || std::abs(v) <= tol) return 0;
        return v > 0.0 ? 1 : -1;
    };
    auto regime_of = [](const PathSample& x) {
        return classify_regime(SpeedPair{x.c1, x.c2});
    };

    std::vector<TransitionEvent> events;
    std::size_t last = s.size();
    int last_sign = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const int sign = significant_sign(s[k].gvar);
        if (sign == 0) continue;
        if (last_sign != 0 && sign != last_sign) {
            const PathSample& a = s[last];
            const PathSample& b = s[k];
            const double w = a.gvar / (a.gvar - b.gvar);
            TransitionEvent e;
            e.family = path.family;
            e.t_event = a.t + w * (b.t - a.t);
            e.r_event = a.r + w * (b.r - a.r);
            e.direction = sign < 0 ? TransitionDirection::RtoC : TransitionDirection::CtoR;
            const double partner = a.partner + w * (b.partner - a.partner);
            e.partner_sign = (!std::isfinite(partner) || std::abs(partner) <= partner_tol)
                                 ? 0
                                 : (partner > 0.0 ? 1 : -1);
            e.regime = classify_regime(SpeedPair{a.c1 + w * (b.c1 - a.c1), a.c2 + w * (b.c2 - a.c2)});
            const RegimeClass first = regime_of(a);
            for (std::size_t i = last; i <= k; ++i) {
                if (regime_of(s[i]) != first || !std::isfinite(s[i].gvar)) e.mixed = true;
            }
            events.push_back(e);
        }
        last = k;
        last_sign = sign;
    }
    return events;
}

std::optional<TransitionDirection> allowed_direction(RegimeClass regime, Family family, int partner_sign) {
    if (partner_sign == 0) return std::nullopt;
    const bool partner_r = partner_sign > 0;
    const auto same = partner_r ? TransitionDirection::CtoR : TransitionDirection::RtoC;
    const auto flipped = partner_r ? TransitionDirection::RtoC : TransitionDirection::CtoR;
    switch (regime) {
    case RegimeClass::OutwardSupersonic: return same;
    case RegimeClass::InwardSupersonic: return flipped;
    case RegimeClass::Subsonic: return family == Family::Two ? same : flipped;
    case RegimeClass::Degenerate: return std::nullopt;
    }
    return std::nullopt;
}

std::vector<TransitionEvent> check_transition_rules(std::span<const TransitionEvent> events,
                                                    RegimeClass regime) {
    std::vector<TransitionEvent> violations;
    for (const TransitionEvent& e : events) {
        const auto allowed = allowed_direction(regime, e.family, e.partner_sign);
        if (allowed && *allowed != e.direction) violations.push_back(e);
    }
    return violations;
}

TransitionAudit audit_transitions(std::span<const TransitionEvent> events) {
    TransitionAudit audit;
    for (const TransitionEvent& e : events) {
        const auto allowed = e.mixed ? std::nullopt : allowed_direction(e.regime, e.family, e.partner_sign);
        if (!allowed) {
            ++audit.unjudged;
            continue;
        }
        ++audit.judged;
        if (*allowed != e.direction) audit.violations.push_back(e);
    }
    return audit;
}

double speed_transport_mismatch(const CharacteristicPath& path, const GasModel& model) {
    const auto& s = path.samples;
    const double m = static_cast<double>(model.m);
    const double sign = path.family == Family::One ? 1.0 : -1.0;
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < s.size(); ++k) {
        const double dcdt = (s[k + 1].c_own - s[k - 1].c_own) / (s[k + 1].t - s[k - 1].t);
        const double source = sign * m / (4.0 * s[k].r) * (s[k].c2 * s[k].c2 - s[k].c1 * s[k].c1);
        worst = std::max(worst, std::abs(dcdt - source));
    }
    return worst;
}

}  // namespace rsdle
