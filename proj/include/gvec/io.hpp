// Readers and writers for the on-disk formats:
//   .pts    - plain-text landmark annotations ("version:", "n_points:", braces)
//   .gvt    - binary tensor: magic "GVT1", u32 LE rank, rank x u32 LE dims,
//             then f32 LE payload, row-major with the last dim fastest
//   reports - JSON with fixed field names and deterministic key order
// All round trips are lossless for finite 32-bit payloads.
#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "gvec/bench.hpp"
#include "gvec/codec.hpp"
#include "gvec/metrics.hpp"
#include "gvec/types.hpp"

namespace gvec {

struct PtsFile {
    int version = 1;
    std::vector<Point2> points;

    std::size_t n_points() const { return points.size(); }
};

struct TensorFile {
    std::vector<std::uint32_t> dims;
    std::vector<float> payload;

    std::size_t element_count() const {
        std::size_t n = 1;
        for (auto d : dims) n *= d;
        return dims.empty() ? 0 : n;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

inline double parse_double(std::string_view token, const char* what) {
    double value = 0.0;
    const auto* end = token.data() + token.size();
    const auto res = std::from_chars(token.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw std::runtime_error(std::string(what) + ": not a number: '" + std::string(token) + "'");
    return value;
}

inline long parse_header_int(std::string_view line, std::string_view key) {
    const auto trimmed = trim(line);
    const std::size_t colon = trimmed.find(':');
    if (colon == std::string_view::npos || trim(trimmed.substr(0, colon)) != key)
        throw std::runtime_error("pts: malformed header, expected '" + std::string(key) + ":'");
    const auto value = trim(trimmed.substr(colon + 1));
    long parsed = 0;
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, parsed);
    if (res.ec != std::errc{} || res.ptr != end)
        throw std::runtime_error("pts: malformed header value for '" + std::string(key) + "'");
    return parsed;
}

inline void append_double(std::string& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

inline void append_u32_le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

inline std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace detail

/// Parse a .pts annotation. Coordinates are loaded verbatim; origin
/// conventions are the caller's concern.
inline PtsFile read_pts(std::string_view text) {
    const auto lines = detail::split_lines(text);
    if (lines.size() < 4) throw std::runtime_error("pts: truncated file");
    PtsFile pts;
    pts.version = static_cast<int>(detail::parse_header_int(lines[0], "version"));
    const long declared = detail::parse_header_int(lines[1], "n_points");
    if (declared < 0) throw std::runtime_error("pts: negative n_points");
    if (detail::trim(lines[2]) != "{") throw std::runtime_error("pts: expected '{'");
    std::size_t row = 3;
    for (; row < lines.size(); ++row) {
        const auto line = detail::trim(lines[row]);
        if (line == "}") break;
        if (line.empty()) continue;
        const std::size_t space = line.find_first_of(" \t");
        if (space == std::string_view::npos) throw std::runtime_error("pts: expected 'x y' coordinate row");
        Point2 p;
        p.x = detail::parse_double(detail::trim(line.substr(0, space)), "pts");
        p.y = detail::parse_double(detail::trim(line.substr(space + 1)), "pts");
        pts.points.push_back(p);
    }
    if (row >= lines.size()) throw std::runtime_error("pts: missing closing '}'");
    if (pts.points.size() != static_cast<std::size_t>(declared))
        throw std::runtime_error("pts: n_points header does not match coordinate rows");
    return pts;
}

inline std::string write_pts(const PtsFile& pts) {
    std::string out;
    out += "version: " + std::to_string(pts.version) + "\n";
    out += "n_points: " + std::to_string(pts.n_points()) + "\n";
    out += "{\n";
    for (const auto& p : pts.points) {
        detail::append_double(out, p.x);
        out += ' ';
        detail::append_double(out, p.y);
        out += '\n';
    }
    out += "}\n";
    return out;
}

inline constexpr std::string_view kTensorMagic = "GVT1";
inline constexpr std::uint32_t kTensorMaxRank = 32;
inline constexpr std::uint64_t kTensorMaxElements = 1ull << 31;

inline std::string write_tensor(const TensorFile& t) {
    if (t.dims.empty()) throw std::runtime_error("gvt: empty dims");
    if (t.dims.size() > kTensorMaxRank) throw std::runtime_error("gvt: rank too large");
    std::uint64_t n = 1;
    for (auto d : t.dims) {
        if (d == 0) throw std::runtime_error("gvt: zero dimension");
        n *= d;
        if (n > kTensorMaxElements) throw std::runtime_error("gvt: tensor too large");
    }
    if (t.payload.size() != n) throw std::runtime_error("gvt: payload length does not match dims");
    std::string out;
    out.reserve(8 + 4 * t.dims.size() + 4 * t.payload.size());
    out += kTensorMagic;
    detail::append_u32_le(out, static_cast<std::uint32_t>(t.dims.size()));
    for (auto d : t.dims) detail::append_u32_le(out, d);
    for (float f : t.payload) detail::append_u32_le(out, std::bit_cast<std::uint32_t>(f));
    return out;
}

inline TensorFile read_tensor(std::string_view bytes) {
    if (bytes.size() < 8 || bytes.substr(0, 4) != kTensorMagic)
        throw std::runtime_error("gvt: bad magic");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint32_t rank = detail::read_u32_le(p + 4);
    if (rank == 0) throw std::runtime_error("gvt: empty dims");
    if (rank > kTensorMaxRank) throw std::runtime_error("gvt: rank too large");
    if (bytes.size() < 8 + 4ull * rank) throw std::runtime_error("gvt: truncated header");
    TensorFile t;
    t.dims.resize(rank);
    std::uint64_t n = 1;
    for (std::uint32_t i = 0; i < rank; ++i) {
        t.dims[i] = detail::read_u32_le(p + 8 + 4 * i);
        if (t.dims[i] == 0) throw std::runtime_error("gvt: zero dimension");
        n *= t.dims[i];
        if (n > kTensorMaxElements) throw std::runtime_error("gvt: tensor too large");
    }
    const std::size_t header = 8 + 4ull * rank;
    if (bytes.size() != header + 4 * n)
        throw std::runtime_error(bytes.size() < header + 4 * n ? "gvt: truncated payload"
                                                               : "gvt: trailing bytes after payload");
    t.payload.resize(n);
    for (std::uint64_t i = 0; i < n; ++i)
        t.payload[i] = std::bit_cast<float>(detail::read_u32_le(p + header + 4 * i));
    return t;
}

// --- conversions between tensors and in-memory stacks -----------------------

inline TensorFile tensor_from_stack(const HeatmapStack& stack) {
    stack.validate();
    TensorFile t;
    t.dims = {static_cast<std::uint32_t>(stack.landmarks), static_cast<std::uint32_t>(stack.height),
              static_cast<std::uint32_t>(stack.width)};
    t.payload = stack.values;
    return t;
}

inline HeatmapStack stack_from_tensor(const TensorFile& t) {
    if (t.dims.size() != 3) throw std::runtime_error("gvt: heatmap stack requires rank-3 dims (L,h,w)");
    HeatmapStack stack;
    stack.landmarks = static_cast<int>(t.dims[0]);
    stack.height = static_cast<int>(t.dims[1]);
    stack.width = static_cast<int>(t.dims[2]);
    stack.values = t.payload;
    stack.validate();
    return stack;
}

/// Vector pairs ship as (L, side, 2) with y in channel 0 and x in channel 1;
/// requires a square grid. The interleaved layout keeps each landmark's two
/// vectors adjacent, matching the documented wire format byte-for-byte.
inline TensorFile tensor_from_pairs(const std::vector<GaussianVectorPair>& pairs) {
    if (pairs.empty()) throw std::runtime_error("gvt: no vector pairs to pack");
    const std::size_t side = pairs.front().x.size();
    TensorFile t;
    t.dims = {static_cast<std::uint32_t>(pairs.size()), static_cast<std::uint32_t>(side), 2};
    t.payload.resize(pairs.size() * side * 2);
    for (std::size_t l = 0; l < pairs.size(); ++l) {
        const auto& p = pairs[l];
        if (p.x.size() != side || p.y.size() != side)
            throw std::runtime_error("gvt: vector pairs must share one square side length");
        for (std::size_t i = 0; i < side; ++i) {
            t.payload[(l * side + i) * 2 + 0] = p.y[i];
            t.payload[(l * side + i) * 2 + 1] = p.x[i];
        }
    }
    return t;
}

inline std::vector<GaussianVectorPair> pairs_from_tensor(const TensorFile& t) {
    if (t.dims.size() != 3 || t.dims[2] != 2)
        throw std::runtime_error("gvt: vector stack requires rank-3 dims (L,side,2)");
    const std::size_t landmarks = t.dims[0];
    const std::size_t side = t.dims[1];
    std::vector<GaussianVectorPair> pairs(landmarks);
    for (std::size_t l = 0; l < landmarks; ++l) {
        auto& p = pairs[l];
        p.landmark_index = static_cast<int>(l);
        p.x.resize(side);
        p.y.resize(side);
        for (std::size_t i = 0; i < side; ++i) {
            p.y[i] = t.payload[(l * side + i) * 2 + 0];
            p.x[i] = t.payload[(l * side + i) * 2 + 1];
        }
    }
    return pairs;
}

// --- report JSON -------------------------------------------------------------

inline std::string write_report(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["per_sample_nme"] = report.per_sample_nme;
    j["mean_nme"] = report.mean_nme;
    j["auc"] = report.auc;
    j["auc_threshold"] = report.auc_threshold;
    j["fr"] = report.fr;
    j["fr_threshold"] = report.fr_threshold;
    auto ced = nlohmann::ordered_json::array();
    for (const auto& pt : report.ced) ced.push_back({pt.threshold, pt.fraction});
    j["ced"] = ced;
    return j.dump(2) + "\n";
}

inline EvalReport read_report(std::string_view text) {
    const auto j = nlohmann::json::parse(text);
    EvalReport report;
    report.per_sample_nme = j.at("per_sample_nme").get<std::vector<double>>();
    report.mean_nme = j.at("mean_nme").get<double>();
    report.auc = j.at("auc").get<double>();
    report.auc_threshold = j.at("auc_threshold").get<double>();
    report.fr = j.at("fr").get<double>();
    report.fr_threshold = j.at("fr_threshold").get<double>();
    for (const auto& pt : j.at("ced")) report.ced.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
    return report;
}

inline std::string write_bench_report(const BenchReport& report) {
    nlohmann::ordered_json j;
    j["landmarks"] = report.landmarks;
    j["trials"] = report.trials;
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : report.entries) {
        nlohmann::ordered_json je;
        je["n"] = e.n;
        je["ops_2d"] = e.ops_2d;
        je["ops_vec"] = e.ops_vec;
        je["wall_2d_ns"] = e.wall_2d_ns;
        je["wall_vec_ns"] = e.wall_vec_ns;
        je["bytes_2d"] = e.bytes_2d;
        je["bytes_vec"] = e.bytes_vec;
        entries.push_back(je);
    }
    j["entries"] = entries;
    j["exponent_2d"] = report.exponent_2d;
    j["exponent_vec"] = report.exponent_vec;
    return j.dump(2) + "\n";
}

// --- filesystem helpers --------------------------------------------------------

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

/// Write-temp-then-rename so readers never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view data) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open file for writing: " + tmp.string());
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace gvec
