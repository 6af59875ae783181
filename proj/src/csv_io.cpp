#include "rsdle/csv_io.hpp"

#include <openssl/evp.h>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include "rsdle/error.hpp"

namespace rsdle {

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, kNumberFormat, value);
    return buf;
}

void write_text(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_snapshot(const std::filesystem::path& path, const RadialGrid& grid, const PrimitiveField& field,
                    const GradientField& gradients) {
    const std::size_t n = field.size();
    if (grid.size() != n || gradients.size() != n) throw ShapeError("write_snapshot: sizes differ");
    std::string out;
    out.reserve((n + 1) * 9 * 24);
    out += kSnapshotHeader;
    out += '\n';
    for (std::size_t j = 0; j < n; ++j) {
        const double row[] = {grid.center(j), field.rho[j], field.u[j], field.p[j], field.h[j],
                              gradients.alpha[j], gradients.beta[j], field.u[j] - field.h[j],
                              field.u[j] + field.h[j]};
        for (std::size_t k = 0; k < 9; ++k) {
            if (k) out += ',';
            out += format_number(row[k]);
        }
        out += '\n';
    }
    write_text(path, out);
}

void write_heatmap(const std::filesystem::path& path, const Heatmap& map, std::span<const double> times,
                   std::span<const double> radii) {
    if (times.size() != map.rows || radii.size() != map.cols) throw ShapeError("write_heatmap: axis lengths differ");
    std::string out;
    out += kHeatmapCorner;
    for (double r : radii) {
        out += ',';
        out += format_number(r);
    }
    out += '\n';
    for (std::size_t i = 0; i < map.rows; ++i) {
        out += format_number(times[i]);
        for (std::size_t j = 0; j < map.cols; ++j) {
            out += ',';
            out += format_number(map.at(i, j));
        }
        out += '\n';
    }
    write_text(path, out);
}

void write_curve(const std::filesystem::path& path, std::span<const CurvePoint> curve) {
    std::string out;
    out += kCurveHeader;
    out += '\n';
    for (const CurvePoint& p : curve) {
        out += format_number(p.u);
        out += ',';
        out += format_number(p.h);
        out += '\n';
    }
    write_text(path, out);
}

namespace {

struct Line {
    std::string_view text;
    std::size_t number;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t pos = 0, number = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const auto end = nl == std::string_view::npos ? text.size() : nl;
        lines.push_back({text.substr(pos, end - pos), ++number});
        pos = end + 1;
    }
    return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        fields.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return fields;
}

double parse_field(std::string_view s, const std::filesystem::path& path, std::size_t line) {
    const std::string copy(s);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(copy.c_str(), &end);
    if (copy.empty() || end != copy.c_str() + copy.size() || errno == ERANGE)
        throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + copy + "'");
    return v;
}

[[noreturn]] void parse_error(const std::filesystem::path& path, std::size_t line, const std::string& what) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

SnapshotTable read_snapshot(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    const auto lines = split_lines(text);
    if (lines.empty()) parse_error(path, 1, "empty file");
    if (lines[0].text != kSnapshotHeader) parse_error(path, 1, "unexpected header");
    SnapshotTable t;
    std::vector<double>* cols[] = {&t.r, &t.rho, &t.u, &t.p, &t.h, &t.alpha, &t.beta, &t.c1, &t.c2};
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i].text);
        if (fields.size() != 9) parse_error(path, lines[i].number, "expected 9 columns");
        for (std::size_t k = 0; k < 9; ++k) cols[k]->push_back(parse_field(fields[k], path, lines[i].number));
    }
    return t;
}

HeatmapTable read_heatmap(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    const auto lines = split_lines(text);
    if (lines.empty()) parse_error(path, 1, "empty file");
    const auto head = split_fields(lines[0].text);
    if (head.empty() || head[0] != kHeatmapCorner) parse_error(path, 1, "unexpected header");
    HeatmapTable t;
    for (std::size_t k = 1; k < head.size(); ++k) t.radii.push_back(parse_field(head[k], path, 1));
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i].text);
        if (fields.size() != head.size()) parse_error(path, lines[i].number, "ragged row");
        t.times.push_back(parse_field(fields[0], path, lines[i].number));
        std::vector<double> row;
        for (std::size_t k = 1; k < fields.size(); ++k) row.push_back(parse_field(fields[k], path, lines[i].number));
        rows.push_back(std::move(row));
    }
    t.values = heatmap_accumulate(rows);
    t.values.cols = t.radii.size();
    return t;
}

std::vector<CurvePoint> read_curve(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    const auto lines = split_lines(text);
    if (lines.empty()) parse_error(path, 1, "empty file");
    if (lines[0].text != kCurveHeader) parse_error(path, 1, "unexpected header");
    std::vector<CurvePoint> curve;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i].text);
        if (fields.size() != 2) parse_error(path, lines[i].number, "expected 2 columns");
        curve.push_back({parse_field(fields[0], path, lines[i].number), parse_field(fields[1], path, lines[i].number)});
    }
    return curve;
}

std::string sha256_file(const std::filesystem::path& path) {
    const std::string data = read_text(path);
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
        throw IoError("sha256 failed for '" + path.string() + "'");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

}  // namespace rsdle
