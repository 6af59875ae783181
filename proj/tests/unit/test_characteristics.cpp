#include <cmath>
#include <functional>
#include <numbers>

#include "doctest.h"
#include "rsdle/characteristics.hpp"
#include "rsdle/error.hpp"
#include "rsdle/initial_data.hpp"

using namespace rsdle;

namespace {

using Profile = std::function<double(double t, double r)>;

FieldTrajectory synthetic(const RadialGrid& grid, double t_end, std::size_t frames, const Profile& c1,
                          const Profile& c2, const Profile& alpha, const Profile& beta) {
    FieldTrajectory traj(grid);
    for (std::size_t k = 0; k <= frames; ++k) {
        const double t = t_end * static_cast<double>(k) / static_cast<double>(frames);
        const std::size_t n = grid.size();
        std::vector<double> a(n), b(n), c(n), d(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double r = grid.center(j);
            a[j] = c1(t, r);
            b[j] = c2(t, r);
            c[j] = alpha(t, r);
            d[j] = beta(t, r);
        }
        traj.add_frame(t, a, b, c, d);
    }
    return traj;
}

Profile constant(double v) {
    return [v](double, double) { return v; };
}

CharacteristicPath path_with(Family family, const std::vector<double>& t, const std::vector<double>& g,
                             double c1, double c2, double partner) {
    CharacteristicPath p;
    p.family = family;
    for (std::size_t i = 0; i < t.size(); ++i) p.samples.push_back({t[i], 1.0, 0.0, g[i], partner, c1, c2});
    return p;
}

}  // namespace

TEST_CASE("trajectory interpolation") {
    const RadialGrid grid(0.0, 4.0, 4);  // centers 0.5 .. 3.5
    const auto traj = synthetic(grid, 1.0, 2, [](double t, double r) { return t + r; }, constant(2.0),
                                constant(0.0), constant(0.0));
    CHECK(traj.frames() == 3);
    CHECK(traj.sample(0.25, 1.0).c1 == doctest::Approx(1.25));
    CHECK(traj.sample(0.75, 2.25).c1 == doctest::Approx(3.0));
    // Beyond the outermost centers the boundary value holds.
    CHECK(traj.sample(0.0, 0.1).c1 == doctest::Approx(0.5));
    CHECK(traj.sample(1.0, 3.9).c1 == doctest::Approx(4.5));

    FieldTrajectory bad(grid);
    bad.add_frame(0.0, {1, 1, 1, 1}, {1, 1, 1, 1}, {0, 0, 0, 0}, {0, 0, 0, 0});
    CHECK_THROWS_AS(bad.add_frame(0.0, {1, 1, 1, 1}, {1, 1, 1, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}), DomainError);
    CHECK_THROWS_AS(bad.add_frame(1.0, {1, 1}, {1, 1, 1, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}), ShapeError);
}

TEST_CASE("flow map under constant speed") {
    const RadialGrid grid(0.0, 10.0, 50);
    const auto traj = synthetic(grid, 2.0, 40, constant(1.5), constant(2.5), constant(0.0), constant(0.0));
    const CharacteristicPath one = advance_flow_map(Family::One, 1.0, traj);
    CHECK(one.samples.size() == 41);
    CHECK(one.exit == PathExit::None);
    for (const PathSample& s : one.samples) {
        CHECK(s.r == doctest::Approx(1.0 + 1.5 * s.t).epsilon(1e-13));
        CHECK(s.c_own == doctest::Approx(1.5));
    }
    const CharacteristicPath two = advance_flow_map(Family::Two, 1.0, traj);
    CHECK(two.samples.back().r == doctest::Approx(6.0).epsilon(1e-13));

    const CharacteristicPath out = advance_flow_map(Family::Two, 8.0, traj);
    CHECK(out.exit == PathExit::Outer);
    CHECK(out.samples.back().r <= 10.0);

    CHECK_THROWS_AS(advance_flow_map(Family::One, 11.0, traj), DomainError);
}

TEST_CASE("flow map in a static gas follows the sound speed") {
    const GasModel model{1.0, 3.0, 1};
    const RadialGrid grid(1.0, 3.0, 32);
    PrimitiveField f;
    f.resize(32);
    for (std::size_t j = 0; j < 32; ++j) f.set(j, make_primitive(0.2, 0.0, model));
    const double h = f.h[0];
    const GradientField g = gradient_variables_masked(f, grid, model);
    FieldTrajectory traj(grid);
    for (int k = 0; k <= 10; ++k) traj.add_frame(0.1 * k, f, g);
    const CharacteristicPath p = advance_flow_map(Family::Two, 1.2, traj);
    for (const PathSample& s : p.samples) CHECK(s.r == doctest::Approx(1.2 + h * s.t).epsilon(1e-13));
    const CharacteristicPath q = advance_flow_map(Family::One, 2.8, traj);
    for (const PathSample& s : q.samples) CHECK(s.r == doctest::Approx(2.8 - h * s.t).epsilon(1e-13));
}

TEST_CASE("decoupled riccati matches the closed form") {
    const GasModel planar{1.0, 3.0, 0};
    const RadialGrid grid(0.0, 10.0, 20);
    const auto traj = synthetic(grid, 0.3, 30, constant(1.0), constant(2.0), constant(-3.0), constant(-3.0));
    const CharacteristicPath path = advance_flow_map(Family::One, 1.0, traj);
    const RiccatiPrediction pred = riccati_along_path(path, planar);
    CHECK(pred.at(0.2) == doctest::Approx(-7.5).epsilon(1e-9));
    for (std::size_t i = 0; i < pred.time.size(); ++i)
        CHECK(pred.predicted[i] == doctest::Approx(decoupled_riccati(-3.0, pred.time[i])).epsilon(1e-9));
    CHECK_FALSE(pred.divergence_time.has_value());

    const auto longer = synthetic(grid, 0.5, 50, constant(1.0), constant(2.0), constant(-3.0), constant(-3.0));
    const RiccatiPrediction blow = riccati_along_path(advance_flow_map(Family::One, 1.0, longer), planar);
    REQUIRE(blow.divergence_time.has_value());
    CHECK(std::abs(*blow.divergence_time - 1.0 / 3.0) <= 1e-3);

    const auto still = synthetic(grid, 1.0, 10, constant(1.0), constant(2.0), constant(0.0), constant(0.0));
    for (double v : riccati_along_path(advance_flow_map(Family::Two, 1.0, still), planar).predicted) CHECK(v == 0.0);
}

TEST_CASE("coupled riccati with frozen coefficients") {
    // g' = -g^2 + k (P - g) with constant k, P: roots of g^2 + k g - k P = 0.
    const GasModel model{1.0, 3.0, 1};
    const RadialGrid grid(0.0, 4.0, 40);
    const double r = 2.0, c1 = 1.0, c2 = 3.0, P = 0.5, g0 = 2.0;
    CharacteristicPath path;
    path.family = Family::One;
    for (int i = 0; i <= 100; ++i) path.samples.push_back({0.01 * i, r, c1, g0, P, c1, c2});
    const double k = model.m * c2 * c2 / (2.0 * r * c1);
    const double disc = std::sqrt(k * k + 4.0 * k * P);
    const double gp = 0.5 * (-k + disc), gm = 0.5 * (-k - disc);
    const auto exact = [&](double t) {
        const double C = (g0 - gp) / (g0 - gm) * std::exp(-(gp - gm) * t);
        return (gp - C * gm) / (1.0 - C);
    };
    const RiccatiPrediction pred = riccati_along_path(path, model);
    for (std::size_t i = 0; i < pred.time.size(); ++i)
        CHECK(pred.predicted[i] == doctest::Approx(exact(pred.time[i])).epsilon(1e-10));
}

TEST_CASE("riccati oracle preconditions") {
    const RadialGrid grid(0.0, 10.0, 20);
    const auto traj = synthetic(grid, 1.0, 10, constant(1.0), constant(2.0), constant(1.0), constant(1.0));
    const CharacteristicPath path = advance_flow_map(Family::One, 1.0, traj);
    CHECK_THROWS_AS(riccati_along_path(path, GasModel{1.0, 1.4, 1}), UnsupportedGamma);

    const auto sonic = synthetic(grid, 1.0, 10, [](double t, double) { return 0.5 - t; }, constant(2.0),
                                 constant(1.0), constant(1.0));
    try {
        (void)riccati_along_path(advance_flow_map(Family::One, 1.0, sonic), GasModel{1.0, 3.0, 1});
        FAIL("expected SonicOnPath");
    } catch (const SonicOnPath& e) {
        CHECK(e.time() == doctest::Approx(0.5));
    }
}

TEST_CASE("influence domain") {
    const RadialGrid grid(0.0, 10.0, 100);
    const auto traj = synthetic(grid, 2.0, 20, constant(1.0), constant(2.0), constant(0.0), constant(0.0));
    const InfluenceDomain d = influence_domain(0.0, 1.0, traj);
    CHECK(d.left_at(0.0) == 0.0);
    CHECK(d.right_at(0.0) == 1.0);
    REQUIRE(d.t_max.has_value());
    CHECK(*d.t_max == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.left_at(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.right_at(0.5) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(d.contains(0.5, 1.2));
    CHECK_FALSE(d.contains(0.5, 0.9));
    CHECK_FALSE(d.contains(1.5, 2.5));
    CHECK(d.contains(0.0, 0.0));

    const auto parallel = synthetic(grid, 2.0, 20, constant(1.5), constant(1.5), constant(0.0), constant(0.0));
    const InfluenceDomain e = influence_domain(2.0, 3.0, parallel);
    CHECK_FALSE(e.t_max.has_value());
    CHECK(e.right_at(2.0) - e.left_at(2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.contains(2.0, 5.5));
}

TEST_CASE("transition events") {
    std::vector<double> t, up, down, sine;
    for (int i = 0; i <= 200; ++i) {
        const double x = 0.01 * i;
        t.push_back(x);
        up.push_back(x - 1.0 + 0.005);
        down.push_back(2.0 + x);
    }
    CHECK(transition_events(path_with(Family::Two, t, down, 1.0, 2.0, 1.0)).empty());

    const auto ev = transition_events(path_with(Family::Two, t, up, 1.0, 2.0, 1.0));
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].direction == TransitionDirection::CtoR);
    CHECK(ev[0].t_event == doctest::Approx(0.995).epsilon(1e-12));
    CHECK(ev[0].partner_sign == 1);
    CHECK(ev[0].regime == RegimeClass::OutwardSupersonic);
    CHECK_FALSE(ev[0].mixed);

    std::vector<double> ts;
    const double two_pi = 2.0 * std::numbers::pi;
    for (int i = 0; i <= 1000; ++i) {
        const double x = 0.5 + two_pi * i / 1000.0;
        ts.push_back(x);
        sine.push_back(std::sin(x));
    }
    const auto sev = transition_events(path_with(Family::One, ts, sine, -1.0, 1.0, -2.0));
    REQUIRE(sev.size() == 2);
    CHECK(sev[0].direction == TransitionDirection::RtoC);
    CHECK(sev[0].t_event == doctest::Approx(std::numbers::pi).epsilon(1e-4));
    CHECK(sev[1].direction == TransitionDirection::CtoR);
    CHECK(sev[1].t_event == doctest::Approx(two_pi).epsilon(1e-4));
    CHECK(sev[0].partner_sign == -1);
    CHECK(sev[0].regime == RegimeClass::Subsonic);

    // Round-off chatter around zero does not count.
    const std::vector<double> tc{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> chatter{1.0, 1e-12, -1e-12, 1.0};
    CHECK(transition_events(path_with(Family::One, tc, chatter, 1.0, 2.0, 1.0)).empty());
}

TEST_CASE("transition rule tables") {
    TransitionEvent e;
    e.family = Family::Two;
    e.partner_sign = 1;
    e.direction = TransitionDirection::CtoR;
    std::vector<TransitionEvent> events{e};
    CHECK(check_transition_rules(events, RegimeClass::OutwardSupersonic).empty());
    events[0].direction = TransitionDirection::RtoC;
    CHECK(check_transition_rules(events, RegimeClass::OutwardSupersonic).size() == 1);
    events[0].direction = TransitionDirection::CtoR;
    CHECK(check_transition_rules(events, RegimeClass::InwardSupersonic).size() == 1);

    using enum RegimeClass;
    using D = TransitionDirection;
    CHECK(allowed_direction(OutwardSupersonic, Family::One, 1) == D::CtoR);
    CHECK(allowed_direction(OutwardSupersonic, Family::One, -1) == D::RtoC);
    CHECK(allowed_direction(InwardSupersonic, Family::Two, 1) == D::RtoC);
    CHECK(allowed_direction(InwardSupersonic, Family::One, -1) == D::CtoR);
    CHECK(allowed_direction(Subsonic, Family::Two, 1) == D::CtoR);
    CHECK(allowed_direction(Subsonic, Family::Two, -1) == D::RtoC);
    CHECK(allowed_direction(Subsonic, Family::One, 1) == D::RtoC);
    CHECK(allowed_direction(Subsonic, Family::One, -1) == D::CtoR);
    CHECK_FALSE(allowed_direction(Degenerate, Family::One, 1).has_value());
    CHECK_FALSE(allowed_direction(Subsonic, Family::One, 0).has_value());
}

TEST_CASE("transition audit judges each event by its own regime") {
    TransitionEvent ok;
    ok.family = Family::One;
    ok.partner_sign = -1;
    ok.direction = TransitionDirection::RtoC;
    ok.regime = RegimeClass::OutwardSupersonic;
    TransitionEvent bad = ok;
    bad.regime = RegimeClass::InwardSupersonic;
    TransitionEvent mixed = bad;
    mixed.mixed = true;
    TransitionEvent flat = ok;
    flat.partner_sign = 0;
    const std::vector<TransitionEvent> events{ok, bad, mixed, flat};
    const TransitionAudit audit = audit_transitions(events);
    CHECK(audit.judged == 2);
    CHECK(audit.unjudged == 2);
    REQUIRE(audit.violations.size() == 1);
    CHECK(audit.violations[0].regime == RegimeClass::InwardSupersonic);
}

TEST_CASE("recorder stores frames at the requested spacing") {
    const GasModel model{1.0, 3.0, 1};
    const RadialGrid grid(1.0, 2.0, 16);
    PrimitiveField f;
    f.resize(16);
    for (std::size_t j = 0; j < 16; ++j) f.set(j, make_primitive(1.0, 0.0, model));
    const ConservedField initial = conserved_from_primitives(f, grid, model);
    FieldTrajectory traj(grid);
    std::vector<Observer> obs{make_trajectory_recorder(traj, model, 0.05, 1.0)};
    const AdvanceResult r = advance(initial, grid, model, SchemeParams{}, BoundaryCondition::NeumannZeroGradient, 0.5, obs);
    CHECK(r.completed());
    CHECK(traj.t_begin() == 0.0);
    CHECK(traj.t_end() == 0.5);
    const auto times = traj.times();
    for (std::size_t k = 1; k + 1 < times.size(); ++k) CHECK(times[k] - times[k - 1] >= 0.05);
    CHECK(traj.frames() >= 10);
    CHECK(traj.frames() <= 12);
}

TEST_CASE("riccati oracle tracks a smooth gamma = 3 run") {
    // Rarefactive outward-supersonic data; measured error must shrink under refinement.
    const GasModel model{1.0, 3.0, 1};
    const PrescribedCharacterIC ic{1.0, 1.0, 10.0, 1.0, 10.0};
    double prev = 0.0;
    double prev_speed = 0.0;
    for (std::size_t n : {128u, 256u}) {
        const RadialGrid grid(10.0, 20.0, n);
        const PrimitiveField f = synthesize_profiles(ic, grid, model);
        FieldTrajectory traj(grid);
        std::vector<Observer> obs{make_trajectory_recorder(traj, model, 0.0, 0.3)};
        const AdvanceResult r = advance(conserved_from_primitives(f, grid, model), grid, model, SchemeParams{},
                                        BoundaryCondition::NeumannZeroGradient, 0.3, obs);
        REQUIRE(r.completed());
        double err = 0.0;
        for (Family fam : {Family::One, Family::Two}) {
            const CharacteristicPath path = advance_flow_map(fam, 12.0, traj);
            const RiccatiPrediction pred = riccati_along_path(path, model);
            for (std::size_t i = 0; i < pred.time.size(); ++i)
                err = std::max(err, std::abs(pred.predicted[i] - path.samples[i].gvar));
            const double speed = speed_transport_mismatch(path, model);
            if (fam == Family::One) {
                if (prev_speed > 0.0) CHECK(speed < prev_speed);
                prev_speed = speed;
            }
        }
        if (prev > 0.0) CHECK(err < prev);
        CHECK(err < 0.2);
        prev = err;
    }
}

TEST_CASE("strided recorder keeps memory bounded") {
    const GasModel model{1.0, 3.0, 1};
    const RadialGrid grid(1.0, 2.0, 16);
    PrimitiveField f;
    f.resize(16);
    for (std::size_t j = 0; j < 16; ++j) f.set(j, make_primitive(1.0, 0.0, model));
    FieldTrajectory traj(grid);
    std::vector<Observer> obs{make_strided_recorder(traj, model, 16, 10.0)};
    const AdvanceResult r = advance(conserved_from_primitives(f, grid, model), grid, model, SchemeParams{},
                                    BoundaryCondition::NeumannZeroGradient, 1.0, obs);
    CHECK(r.steps > 100);
    CHECK(traj.frames() < 16);
    CHECK(traj.frames() >= 8);
    CHECK(traj.t_begin() == 0.0);
    CHECK(traj.t_end() == 1.0);
}

TEST_CASE("decimation keeps even frames intact") {
    const RadialGrid grid(0.0, 1.0, 4);
    FieldTrajectory traj(grid);
    for (int k = 0; k < 5; ++k) {
        const double v = k;
        traj.add_frame(0.1 * k, std::vector<double>(4, -v), std::vector<double>(4, v), std::vector<double>(4, 2 * v),
                       std::vector<double>(4, 3 * v));
    }
    traj.decimate();
    REQUIRE(traj.frames() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        const double v = 2.0 * k;
        CHECK(traj.times()[k] == doctest::Approx(0.2 * k));
        const FieldSample s = traj.sample_frame(k, 0.5);
        CHECK(s.c1 == -v);
        CHECK(s.c2 == v);
        CHECK(s.alpha == 2 * v);
        CHECK(s.beta == 3 * v);
    }
}
