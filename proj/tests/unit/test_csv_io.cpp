#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <vector>

#include "rsdle/csv_io.hpp"
#include "rsdle/error.hpp"

using namespace rsdle;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "rsdle_csv_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::size_t count(const std::string& s, char c) {
    std::size_t n = 0;
    for (char x : s) n += x == c;
    return n;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("number format keeps 17 significant digits") {
    CHECK(format_number(1.0) == "1.0000000000000000e+00");
    CHECK(format_number(-0.1) == "-1.0000000000000001e-01");
    CHECK(std::strtod(format_number(M_PI).c_str(), nullptr) == M_PI);
}

TEST_CASE("snapshot layout and round trip") {
    TempDir dir;
    const GasModel model{1.0, 3.0, 1};
    const RadialGrid grid(1.0, 2.0, 4);
    const std::vector<double> rho{1.0, 1.1, 1.3, 1.7};
    const std::vector<double> u{0.1, -0.2, 1.0 / 3.0, 0.0};
    const PrimitiveField field = PrimitiveField::from_density_velocity(rho, u, model);
    GradientField grad;
    grad.alpha = {0.5, -0.25, std::numeric_limits<double>::quiet_NaN(), 1e-300};
    grad.beta = {1.0 / 7.0, 2.0, -3.0, 4.0};
    grad.char1.assign(4, WaveCharacter::Rarefaction);
    grad.char2.assign(4, WaveCharacter::Rarefaction);

    const fs::path file = dir.path / "snapshot_0000.csv";
    write_snapshot(file, grid, field, grad);
    const std::string text = read_text(file);
    CHECK(count(text, '\n') == 5);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.rfind("r,rho,u,p,h,alpha,beta,c1,c2\n", 0) == 0);
    CHECK(text.back() == '\n');

    const SnapshotTable t = read_snapshot(file);
    REQUIRE(t.size() == 4);
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(same_bits(t.r[j], grid.center(j)));
        CHECK(same_bits(t.rho[j], field.rho[j]));
        CHECK(same_bits(t.u[j], field.u[j]));
        CHECK(same_bits(t.p[j], field.p[j]));
        CHECK(same_bits(t.h[j], field.h[j]));
        CHECK(same_bits(t.beta[j], grad.beta[j]));
        CHECK(same_bits(t.c1[j], field.u[j] - field.h[j]));
        CHECK(same_bits(t.c2[j], field.u[j] + field.h[j]));
        if (j != 2) CHECK(same_bits(t.alpha[j], grad.alpha[j]));
    }
    CHECK(std::isnan(t.alpha[2]));
}

TEST_CASE("heatmap layout and round trip") {
    TempDir dir;
    const std::vector<double> radii{1.0, 1.5, 2.0, 2.5, 3.0};
    const std::vector<double> times{0.0, 0.5, 1.0};
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<double> row;
        for (std::size_t j = 0; j < 5; ++j) row.push_back(std::sin(0.3 * i + 0.7 * j) / 3.0);
        rows.push_back(row);
    }
    const Heatmap map = heatmap_accumulate(rows);
    const fs::path file = dir.path / "heatmap_alpha.csv";
    write_heatmap(file, map, times, radii);

    const std::string text = read_text(file);
    CHECK(count(text, '\n') == 4);
    CHECK(text.rfind("t\\r,", 0) == 0);
    CHECK(count(text.substr(0, text.find('\n')), ',') == 5);

    const HeatmapTable t = read_heatmap(file);
    CHECK(t.times == times);
    CHECK(t.radii == radii);
    REQUIRE(t.values.rows == 3);
    REQUIRE(t.values.cols == 5);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(same_bits(t.values.at(i, j), map.at(i, j)));

    CHECK_THROWS_AS(write_heatmap(file, map, radii, radii), ShapeError);
}

TEST_CASE("invariant curve round trip") {
    TempDir dir;
    const std::vector<CurvePoint> curve{{0.1, 2.0}, {-1.0 / 3.0, 2.5}, {1e10, 1e-10}};
    const fs::path file = dir.path / "curve_0000.csv";
    write_curve(file, curve);
    CHECK(read_text(file).rfind("u,h\n", 0) == 0);
    const auto back = read_curve(file);
    REQUIRE(back.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(same_bits(back[k].u, curve[k].u));
        CHECK(same_bits(back[k].h, curve[k].h));
    }
}

TEST_CASE("readers name the offending line") {
    TempDir dir;
    const fs::path file = dir.path / "bad.csv";
    write_text(file, "u,h\n1,2\n3,x\n");
    try {
        read_curve(file);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
    write_text(file, "u,h,z\n");
    CHECK_THROWS_AS(read_curve(file), IoError);
    write_text(file, "t\\r,1,2\n0,1\n");
    CHECK_THROWS_AS(read_heatmap(file), IoError);
    CHECK_THROWS_AS(read_snapshot(dir.path / "missing.csv"), IoError);
}

TEST_CASE("sha256 of known inputs") {
    TempDir dir;
    const fs::path file = dir.path / "digest.txt";
    write_text(file, "");
    CHECK(sha256_file(file) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    write_text(file, "abc");
    CHECK(sha256_file(file) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
