#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "rsdle/diagnostics.hpp"
#include "rsdle/error.hpp"

using namespace rsdle;

namespace {

PrimitiveField uniform_field(std::size_t n, double rho, double u, const GasModel& model) {
    PrimitiveField f;
    f.resize(n);
    for (std::size_t j = 0; j < n; ++j) f.set(j, make_primitive(rho, u, model));
    return f;
}

// Field with prescribed u and h values, rho and p closed from h.
PrimitiveField field_from_uh(const std::vector<double>& u, const std::vector<double>& h,
                             const GasModel& model) {
    PrimitiveField f;
    f.resize(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double rho = density_from_sound_speed(h[j], model);
        f.rho[j] = rho;
        f.u[j] = u[j];
        f.p[j] = pressure(rho, model);
        f.h[j] = h[j];
    }
    return f;
}

}  // namespace

TEST_CASE("wave character follows the sign") {
    CHECK(classify_character(0.3) == WaveCharacter::Rarefaction);
    CHECK(classify_character(-0.3) == WaveCharacter::Compression);
    CHECK(classify_character(0.0) == WaveCharacter::Boundary);
    CHECK(classify_character(std::numeric_limits<double>::quiet_NaN()) == WaveCharacter::Invalid);
}

TEST_CASE("centered differences are second order with a known error bound") {
    for (std::size_t n : {32u, 64u, 128u}) {
        const double dr = 1.0 / static_cast<double>(n);
        std::vector<double> v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = std::sin(dr * static_cast<double>(j));
        const auto d = centered_derivative(v, dr);
        for (std::size_t j = 1; j + 1 < n; ++j)
            CHECK(std::abs(d[j] - std::cos(dr * static_cast<double>(j))) <= dr * dr / 6.0 + 1e-12);
        // one-sided second-order rule: error <= dr^2 / 3 max|u'''|
        CHECK(std::abs(d[0] - 1.0) <= dr * dr / 3.0 + 1e-12);
        const double last = dr * static_cast<double>(n - 1);
        CHECK(std::abs(d[n - 1] - std::cos(last)) <= dr * dr / 3.0 + 1e-12);
    }
    const std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(centered_derivative(two, 1.0), ShapeError);
}

TEST_CASE("gradient variables of a uniform state carry only geometric terms") {
    const GasModel model{1.0, 3.0, 1};
    const RadialGrid grid(8.5, 11.5, 3);  // centers 9, 10, 11
    const std::vector<double> u(3, 10.0), h(3, 1.0);
    const GradientField g = gradient_variables(field_from_uh(u, h, model), grid, model);
    CHECK(g.alpha[1] == doctest::Approx(0.1 * 10.0 / 11.0).epsilon(1e-13));
    CHECK(g.beta[1] == doctest::Approx(-0.1 * 10.0 / 9.0).epsilon(1e-13));
    CHECK(g.char2[1] == WaveCharacter::Rarefaction);
    CHECK(g.char1[1] == WaveCharacter::Compression);
}

TEST_CASE("planar limit drops the geometric terms") {
    const GasModel model{1.0, 1.4, 0};
    const RadialGrid grid(0.0, 1.0, 10);
    std::vector<double> u(10), h(10);
    for (std::size_t j = 0; j < 10; ++j) {
        const double r = grid.center(j);
        u[j] = 5.0 + 2.0 * r;
        h[j] = 1.0 + 0.5 * r;
    }
    const GradientField g = gradient_variables(field_from_uh(u, h, model), grid, model);
    for (std::size_t j = 0; j < 10; ++j) {
        CHECK(g.alpha[j] == doctest::Approx(2.0 + 5.0 * 0.5).epsilon(1e-12));
        CHECK(g.beta[j] == doctest::Approx(2.0 - 5.0 * 0.5).epsilon(1e-12));
    }
}

TEST_CASE("sonic cells: strict variant throws, masked variant marks Invalid") {
    const GasModel model{1.0, 3.0, 1};
    const RadialGrid grid(1.0, 2.0, 5);
    const std::vector<double> u{0.5, 1.0, 2.0, 1.0, 3.0};
    const std::vector<double> h(5, 1.0);
    const PrimitiveField f = field_from_uh(u, h, model);
    try {
        (void)gradient_variables(f, grid, model);
        FAIL("expected SonicDiagnostic");
    } catch (const SonicDiagnostic& e) {
        CHECK(e.cells() == std::vector<std::size_t>{1, 3});
    }
    const GradientField g = gradient_variables_masked(f, grid, model);
    CHECK_FALSE(g.valid(1));
    CHECK_FALSE(g.valid(3));
    CHECK(std::isnan(g.alpha[3]));
    CHECK(g.char2[1] == WaveCharacter::Invalid);
    CHECK(g.valid(0));
    CHECK(std::isfinite(g.beta[4]));
}

TEST_CASE("strong compression threshold") {
    CHECK(strong_compression_threshold(1.0, 2.0, 1.0, 1) == 2.0);
    CHECK(strong_compression_threshold(3.0, 3.0, 5.0, 1) == doctest::Approx(3.0 / 10.0));
    CHECK(strong_compression_threshold(1.5, 4.0, 2.0, 2) ==
          2.0 * strong_compression_threshold(1.5, 4.0, 2.0, 1));
    CHECK_THROWS_AS(strong_compression_threshold(0.0, 2.0, 1.0, 1), DomainError);
    CHECK_THROWS_AS(strong_compression_threshold(1.0, 2.0, -1.0, 1), DomainError);
}

TEST_CASE("singularity time bound") {
    const SingularityBound a = singularity_time_bound(-3.0, 2.0);
    CHECK(a.eps == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(a.t_star == doctest::Approx(1.0).epsilon(1e-15));
    const double M = 1.7;
    const SingularityBound b = singularity_time_bound(-2.0 * M, M);
    CHECK(b.eps == doctest::Approx(0.5));
    CHECK(b.t_star == doctest::Approx(1.0 / M));
    CHECK_THROWS_AS(singularity_time_bound(-M, M), NotStrongCompression);
    CHECK_THROWS_AS(singularity_time_bound(1.0, M), NotStrongCompression);

    double prev = std::numeric_limits<double>::infinity();
    for (double a0 = -2.1; a0 > -50.0; a0 -= 0.5) {
        const double t = singularity_time_bound(a0, 2.0).t_star;
        CHECK(t < prev);
        prev = t;
    }
}

TEST_CASE("best compression bound scans candidate radii") {
    const GasModel model{1.0, 3.0, 1};
    const RadialGrid grid(0.5, 3.5, 3);  // centers 1, 2, 3
    const std::vector<double> u{1.5, 1.5, 1.5}, h{0.5, 0.5, 0.5};
    const PrimitiveField f = field_from_uh(u, h, model);
    GradientField g;
    g.alpha = {-3.0, -3.0, -1.0};
    g.beta = {-1.0, -1.0, -1.0};
    g.char1.assign(3, WaveCharacter::Compression);
    g.char2.assign(3, WaveCharacter::Compression);
    const CompressionBound b = best_compression_bound(f, g, grid, model);
    CHECK(b.S1 == 1.0);
    CHECK(b.S2 == 2.0);
    // M(r) = 2 / r: r=1 gives t* = 1, r=2 gives eps = 2/3 and t* = 1/2.
    CHECK(b.r_star == 2.0);
    CHECK(b.M == doctest::Approx(1.0));
    CHECK(b.t_star == doctest::Approx(0.5));

    g.beta[1] = 0.5;
    CHECK_THROWS_AS(best_compression_bound(f, g, grid, model), NotStrongCompression);
}

TEST_CASE("speed bounds check") {
    const GasModel model{1.0, 3.0, 1};
    const RadialGrid grid(1.0, 2.0, 4);
    const auto everywhere = [](double, double) { return true; };
    std::vector<Snapshot> traj;
    traj.push_back({0.0, 0.0, false, uniform_field(4, 1.0, 3.0, model)});
    CHECK(speed_bounds_check(traj, grid, everywhere) == 0.0);

    Snapshot later{0.5, 0.1, false, traj.front().field};
    later.field.u[2] = 2.5;  // c1 drops by 0.5
    traj.push_back(later);
    CHECK(speed_bounds_check(traj, grid, everywhere) == doctest::Approx(0.5));
    const auto skip_cell2 = [&](double, double r) { return r != grid.center(2); };
    CHECK(speed_bounds_check(traj, grid, skip_cell2) == 0.0);
}

TEST_CASE("blow-up detection") {
    const GasModel model{1.0, 3.0, 1};
    const RadialGrid grid(1.0, 2.0, 20);
    std::vector<Snapshot> still;
    for (int k = 0; k < 5; ++k)
        still.push_back({0.1 * k, k ? 0.1 : 0.0, false, uniform_field(20, 1.0, 0.0, model)});
    CHECK_FALSE(detect_blowup(still, grid).detected);

    // Ramp steepening into a jump at cell 10.
    std::vector<Snapshot> steep;
    for (int k = 0; k < 6; ++k) {
        PrimitiveField f = uniform_field(20, 1.0, 0.0, model);
        const double slope = std::pow(10.0, k);
        for (std::size_t j = 0; j < 20; ++j) {
            const double x = grid.center(j) - grid.center(10);
            f.u[j] = std::tanh(slope * x);
        }
        steep.push_back({0.1 * k, k ? 0.1 : 0.0, false, f});
    }
    const BlowupReport r = detect_blowup(steep, grid, 5.0);
    CHECK(r.detected);
    CHECK(r.trigger == BlowupTrigger::GradientThreshold);
    CHECK(r.t_detect > 0.0);
    CHECK((r.cell == 9 || r.cell == 10 || r.cell == 11));

    std::vector<Snapshot> nan_run = still;
    nan_run[3].field.u[4] = std::numeric_limits<double>::quiet_NaN();
    const BlowupReport rn = detect_blowup(nan_run, grid);
    CHECK(rn.detected);
    CHECK(rn.trigger == BlowupTrigger::NonFinite);
    CHECK(rn.cell == 4);
    CHECK(rn.t_detect == doctest::Approx(0.3));

    std::vector<Snapshot> collapse = still;
    collapse[3].dt = 1e-14;
    CHECK(detect_blowup(collapse, grid).trigger == BlowupTrigger::StepCollapse);
    collapse[3].clipped = true;
    CHECK_FALSE(detect_blowup(collapse, grid).detected);

    CHECK_THROWS_AS(BlowupDetector(grid, 1.0), DomainError);
}

TEST_CASE("invariant curve") {
    const GasModel model{1.0, 3.0, 1};
    const PrimitiveField f = uniform_field(7, 2.0, 0.3, model);
    const auto curve = invariant_curve(f);
    CHECK(curve.size() == 7);
    for (const CurvePoint& p : curve) {
        CHECK(p.u == 0.3);
        CHECK(p.h == f.h[0]);
    }
}

TEST_CASE("heatmap accumulation") {
    const std::vector<std::vector<double>> one{{1.0, 2.0, 3.0}};
    const Heatmap a = heatmap_accumulate(one);
    CHECK(a.rows == 1);
    CHECK(a.cols == 3);
    CHECK(a.at(0, 2) == 3.0);

    const std::vector<std::vector<double>> rows{{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}};
    const Heatmap b = heatmap_accumulate(rows);
    CHECK(b.rows == 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(b.at(k, 1) == 2.0);

    const std::vector<std::vector<double>> ragged{{1.0, 2.0}, {1.0}};
    CHECK_THROWS_AS(heatmap_accumulate(ragged), ShapeError);
}
