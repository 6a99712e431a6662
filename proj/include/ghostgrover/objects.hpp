#pragma once

// Built-in oracle objects and the object file loader.
//
// ASCII object file: optional '#' comment lines, then m lines of m characters
// from {0, 1}. PGM (P2/P5) files are also accepted; any nonzero sample marks
// the pixel.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ghostgrover/error.hpp"
#include "ghostgrover/grid.hpp"
#include "ghostgrover/pgm.hpp"
#include "ghostgrover/photon_state.hpp"

namespace ghostgrover {

namespace detail {

// 16 x 16 glyph, scaled into a centered m/4 box by nearest-neighbour sampling.
inline constexpr std::array<std::string_view, 16> kLetterG = {
    "................",
    ".....######.....",
    "...##########...",
    "..####....####..",
    "..###......###..",
    ".###............",
    ".###............",
    ".###............",
    ".###....######..",
    ".###....######..",
    ".###.......###..",
    "..###......###..",
    "..####....####..",
    "...##########...",
    ".....######.....",
    "................",
};

}  // namespace detail

inline OracleObject empty_object(std::size_t m) { return OracleObject{Grid<std::uint8_t>(m, 0)}; }

//   letter-G    fixed glyph in a centered (m/4) x (m/4) box; m a power of two >= 16
//   block       centered (m/4) x (m/4) square (at least one pixel)
//   two-points  pixels (m/2 - 1, m/2 - 1) and (m/2, m/2)
//   center      the single pixel (m/2, m/2)
inline OracleObject builtin_object(std::string_view name, std::size_t m) {
    require_power_of_two(m, "m");
    OracleObject obj = empty_object(m);
    if (name == "empty") return obj;
    if (name == "center") {
        obj.marks(m / 2, m / 2) = 1;
        return obj;
    }
    if (name == "two-points") {
        if (m < 2) throw InvalidArgument("two-points needs m >= 2");
        obj.marks(m / 2 - 1, m / 2 - 1) = 1;
        obj.marks(m / 2, m / 2) = 1;
        return obj;
    }
    if (name == "block") {
        const std::size_t side = std::max<std::size_t>(1, m / 4);
        const std::size_t off = (m - side) / 2;
        for (std::size_t r = off; r < off + side; ++r)
            for (std::size_t c = off; c < off + side; ++c) obj.marks(r, c) = 1;
        return obj;
    }
    if (name == "letter-G") {
        if (m < 16) throw InvalidArgument("letter-G needs m >= 16");
        const std::size_t box = m / 4;
        const std::size_t off = (m - box) / 2;
        for (std::size_t r = 0; r < box; ++r) {
            for (std::size_t c = 0; c < box; ++c) {
                const char g = detail::kLetterG[r * 16 / box][c * 16 / box];
                obj.marks(off + r, off + c) = g == '#' ? 1 : 0;
            }
        }
        return obj;
    }
    throw InvalidArgument("unknown builtin object '" + std::string(name) +
                          "' (expected letter-G|block|two-points|center|empty)");
}

inline OracleObject parse_ascii_object(std::istream& in, const std::string& source = "<object>",
                                       std::optional<std::size_t> expected_m = std::nullopt) {
    std::vector<std::string> rows;
    std::vector<std::size_t> row_lines;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line.front() == '#') continue;
        if (line.empty()) {
            if (rows.empty()) continue;
            // Trailing blank lines are fine; blank lines inside the raster are not.
            std::string rest;
            while (std::getline(in, rest)) {
                ++lineno;
                if (!rest.empty() && rest != "\r") throw ParseError(source, lineno, 1, "blank line inside object raster");
            }
            break;
        }
        for (std::size_t c = 0; c < line.size(); ++c) {
            if (line[c] != '0' && line[c] != '1') {
                throw ParseError(source, lineno, c + 1,
                                 std::string("unexpected character '") + line[c] + "' (expected 0 or 1)");
            }
        }
        rows.push_back(line);
        row_lines.push_back(lineno);
    }
    if (rows.empty()) throw ParseError(source, lineno, 1, "object file has no raster rows");
    const std::size_t m = rows.size();
    for (std::size_t r = 0; r < m; ++r) {
        if (rows[r].size() != m) {
            throw ParseError(source, row_lines[r], rows[r].size() + 1,
                             "row has " + std::to_string(rows[r].size()) + " columns, expected " + std::to_string(m));
        }
    }
    if (expected_m && *expected_m != m) {
        throw InvalidArgument(source + ": object is " + std::to_string(m) + "x" + std::to_string(m) + ", expected m=" +
                              std::to_string(*expected_m));
    }
    OracleObject obj = empty_object(m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) obj.marks(r, c) = rows[r][c] == '1' ? 1 : 0;
    return obj;
}

inline OracleObject object_from_pgm(const GrayImage& img, const std::string& source,
                                    std::optional<std::size_t> expected_m) {
    if (img.width != img.height) {
        throw InvalidArgument(source + ": object image must be square (got " + std::to_string(img.width) + "x" +
                              std::to_string(img.height) + ")");
    }
    if (expected_m && *expected_m != img.width) {
        throw InvalidArgument(source + ": object is " + std::to_string(img.width) + " wide, expected m=" +
                              std::to_string(*expected_m));
    }
    OracleObject obj = empty_object(img.width);
    for (std::size_t k = 0; k < img.pixels.size(); ++k) obj.marks[k] = img.pixels[k] != 0 ? 1 : 0;
    return obj;
}

inline OracleObject load_object(const std::string& path, std::optional<std::size_t> expected_m = std::nullopt) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open object file '" + path + "'");
    if (in.peek() == 'P') {
        return object_from_pgm(read_pgm(in, path), path, expected_m);
    }
    return parse_ascii_object(in, path, expected_m);
}

// "builtin:<name>" or a file path.
inline OracleObject resolve_object(const std::string& spec, std::size_t m) {
    constexpr std::string_view prefix = "builtin:";
    if (spec.rfind(prefix, 0) == 0) return builtin_object(std::string_view(spec).substr(prefix.size()), m);
    return load_object(spec, m);
}

}  // namespace ghostgrover
