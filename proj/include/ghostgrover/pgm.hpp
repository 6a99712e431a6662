#pragma once

// Minimal netpbm graymap support: P5 writer, P2/P5 reader (maxval <= 255).

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ghostgrover/error.hpp"
#include "ghostgrover/grid.hpp"

namespace ghostgrover {

struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    unsigned maxval = 255;
    std::vector<std::uint8_t> pixels;  // row-major
};

inline void write_pgm(std::ostream& out, const Grid<std::uint8_t>& image) {
    out << "P5\n" << image.side() << ' ' << image.side() << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.values().data()), static_cast<std::streamsize>(image.size()));
}

inline std::string encode_pgm(const Grid<std::uint8_t>& image) {
    std::ostringstream os(std::ios::binary);
    write_pgm(os, image);
    return std::move(os).str();
}

// Affine map value -> byte used for a signed image: byte = round((v - offset) * scale).
// The inverse is v = byte / scale + offset.
struct AffineScale {
    double offset = 0.0;
    double scale = 1.0;
    double min = 0.0;
    double max = 0.0;
};

// Min-max scaling into [0, 255]. A constant image maps to 0 with scale 1.
inline std::pair<Grid<std::uint8_t>, AffineScale> quantize_minmax(const Image& image) {
    AffineScale s;
    if (image.size() == 0) return {Grid<std::uint8_t>(0), s};
    const auto [lo, hi] = std::minmax_element(image.begin(), image.end());
    s.min = *lo;
    s.max = *hi;
    s.offset = *lo;
    s.scale = (*hi > *lo) ? 255.0 / (*hi - *lo) : 1.0;
    Grid<std::uint8_t> out(image.side());
    for (std::size_t k = 0; k < image.size(); ++k) {
        const double b = std::clamp(std::round((image[k] - s.offset) * s.scale), 0.0, 255.0);
        out[k] = static_cast<std::uint8_t>(b);
    }
    return {std::move(out), s};
}

namespace detail {

class PgmHeaderReader {
public:
    PgmHeaderReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    unsigned long next_number() {
        skip_space_and_comments();
        std::string digits;
        while (std::isdigit(in_.peek())) digits.push_back(static_cast<char>(in_.get()));
        if (digits.empty()) throw ParseError(source_, line_, 0, "expected a number in PGM header");
        return std::stoul(digits);
    }

    std::size_t line() const { return line_; }

private:
    void skip_space_and_comments() {
        for (;;) {
            const int c = in_.peek();
            if (c == '#') {
                while (in_.peek() != '\n' && in_.peek() != EOF) in_.get();
            } else if (c == '\n') {
                ++line_;
                in_.get();
            } else if (c != EOF && std::isspace(c)) {
                in_.get();
            } else {
                return;
            }
        }
    }

    std::istream& in_;
    std::string source_;
    std::size_t line_ = 1;
};

}  // namespace detail

inline GrayImage read_pgm(std::istream& in, const std::string& source = "<pgm>") {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5')) {
        throw ParseError(source, 1, 1, "not a P2/P5 graymap");
    }
    detail::PgmHeaderReader header(in, source);
    GrayImage img;
    img.width = header.next_number();
    img.height = header.next_number();
    const auto maxval = header.next_number();
    if (maxval == 0 || maxval > 255) throw ParseError(source, header.line(), 0, "only maxval 1..255 is supported");
    img.maxval = static_cast<unsigned>(maxval);
    const std::size_t count = img.width * img.height;
    img.pixels.resize(count);
    if (magic[1] == '5') {
        in.get();  // single whitespace after maxval
        in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(count));
        if (static_cast<std::size_t>(in.gcount()) != count) throw ParseError(source, header.line(), 0, "truncated P5 data");
    } else {
        for (std::size_t k = 0; k < count; ++k) {
            const auto v = header.next_number();
            if (v > maxval) throw ParseError(source, header.line(), 0, "sample exceeds maxval");
            img.pixels[k] = static_cast<std::uint8_t>(v);
        }
    }
    return img;
}

}  // namespace ghostgrover
