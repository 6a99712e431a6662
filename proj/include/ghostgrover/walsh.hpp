#pragma once

// Walsh functions, 2D Walsh-Hadamard masks, superposition masks and the fast
// Walsh-Hadamard transform.
//
// Two normalizations appear in this library and are never mixed silently:
//   mask view   entries are +1/-1 (what is displayed, and what image synthesis sums)
//   state view  entries are +1/sqrt(M) or -1/sqrt(M) (unit vectors, used for inner products)
// Everything in this header works in the mask view unless stated otherwise.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ghostgrover/error.hpp"
#include "ghostgrover/grid.hpp"

namespace ghostgrover {

enum class WalshOrdering { natural, sequency };

inline const char* to_string(WalshOrdering o) { return o == WalshOrdering::natural ? "natural" : "sequency"; }

inline WalshOrdering parse_ordering(const std::string& s) {
    if (s == "natural") return WalshOrdering::natural;
    if (s == "sequency") return WalshOrdering::sequency;
    throw InvalidArgument("unknown Walsh ordering '" + s + "' (expected natural|sequency)");
}

namespace detail {

inline std::size_t bit_reverse(std::size_t v, unsigned bits) {
    std::size_t r = 0;
    for (unsigned b = 0; b < bits; ++b) {
        r = (r << 1) | ((v >> b) & 1U);
    }
    return r;
}

inline void check_walsh_index(std::size_t u, std::size_t m) {
    require_power_of_two(m, "m");
    if (u >= m) {
        throw InvalidArgument("Walsh index " + std::to_string(u) + " out of range for m=" + std::to_string(m));
    }
}

}  // namespace detail

// Row of the natural-order (Sylvester) Hadamard matrix that carries the given
// index under `ordering`. Sequency index s maps to bitreverse(gray(s)).
inline std::size_t natural_index(std::size_t u, std::size_t m, WalshOrdering ordering) {
    detail::check_walsh_index(u, m);
    if (ordering == WalshOrdering::natural) return u;
    const auto bits = static_cast<unsigned>(std::countr_zero(m));
    return detail::bit_reverse(u ^ (u >> 1), bits);
}

// Value of the u-th natural-order Walsh function at sample x: (-1)^popcount(u & x).
inline int walsh_sign(std::size_t natural_u, std::size_t x) noexcept {
    return (std::popcount(natural_u & x) & 1) ? -1 : 1;
}

inline std::vector<int> walsh_1d(std::size_t u, std::size_t m, WalshOrdering ordering = WalshOrdering::natural) {
    const std::size_t row = natural_index(u, m, ordering);
    std::vector<int> w(m);
    for (std::size_t x = 0; x < m; ++x) w[x] = walsh_sign(row, x);
    return w;
}

struct WalshMask {
    std::size_t m = 0;
    std::size_t j = 0;
    WalshOrdering ordering = WalshOrdering::natural;
    Grid<std::int8_t> values;  // +1 / -1
};

struct SuperpositionMask {
    std::size_t m = 0;
    std::size_t j = 0;
    WalshOrdering ordering = WalshOrdering::natural;
    Image values;  // 0 or sqrt(2)
};

inline void check_mask_index(std::size_t j, std::size_t m) {
    require_power_of_two(m, "m");
    if (j >= m * m) {
        throw InvalidArgument("mask index " + std::to_string(j) + " out of range for m=" + std::to_string(m));
    }
}

// Flat natural-order index of mask j: with j = u*m + v the mask is the outer
// product W_u (along rows) x W_v (along columns), so flattened row-major it is
// row natural_index(u)*m + natural_index(v) of the M x M Hadamard matrix.
inline std::size_t natural_mask_index(std::size_t j, std::size_t m, WalshOrdering ordering) {
    check_mask_index(j, m);
    return natural_index(j / m, m, ordering) * m + natural_index(j % m, m, ordering);
}

inline WalshMask mask_2d(std::size_t j, std::size_t m, WalshOrdering ordering = WalshOrdering::natural) {
    check_mask_index(j, m);
    const auto row_fn = walsh_1d(j / m, m, ordering);
    const auto col_fn = walsh_1d(j % m, m, ordering);
    WalshMask mask{m, j, ordering, Grid<std::int8_t>(m)};
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
            mask.values(r, c) = static_cast<std::int8_t>(row_fn[r] * col_fn[c]);
        }
    }
    return mask;
}

inline SuperpositionMask superposition_mask(std::size_t j, std::size_t m,
                                            WalshOrdering ordering = WalshOrdering::natural) {
    const auto h0 = mask_2d(0, m, ordering);
    const auto hj = mask_2d(j, m, ordering);
    SuperpositionMask q{m, j, ordering, Image(m)};
    for (std::size_t k = 0; k < m * m; ++k) {
        // (1 - (-1)) / sqrt(2) is sqrt(2); spelled out so entries are exact.
        q.values[k] = h0.values[k] == hj.values[k] ? 0.0 : std::numbers::sqrt2;
    }
    return q;
}

// In-place unnormalized natural-order fast Walsh-Hadamard transform: v <- H v
// with H the +1/-1 Sylvester matrix. Applying it twice multiplies by v.size().
inline void fwht_inplace(std::span<double> v) {
    const std::size_t n = v.size();
    require_power_of_two(n, "transform length");
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += h << 1) {
            for (std::size_t k = i; k < i + h; ++k) {
                const double a = v[k];
                const double b = v[k + h];
                v[k] = a + b;
                v[k + h] = a - b;
            }
        }
    }
}

inline std::vector<double> fwht(std::span<const double> v) {
    std::vector<double> out(v.begin(), v.end());
    fwht_inplace(out);
    return out;
}

// Reorders coefficients indexed by mask index (under `ordering`) into natural
// Hadamard order so that fwht() can be applied.
inline std::vector<double> to_natural_order(std::span<const double> coeffs, std::size_t m, WalshOrdering ordering) {
    if (coeffs.size() != m * m) {
        throw InvalidArgument("coefficient vector length " + std::to_string(coeffs.size()) + " != m*m");
    }
    if (ordering == WalshOrdering::natural) return {coeffs.begin(), coeffs.end()};
    std::vector<double> out(coeffs.size());
    for (std::size_t j = 0; j < coeffs.size(); ++j) out[natural_mask_index(j, m, ordering)] = coeffs[j];
    return out;
}

// Inverse of to_natural_order.
inline std::vector<double> from_natural_order(std::span<const double> natural, std::size_t m,
                                              WalshOrdering ordering) {
    if (natural.size() != m * m) {
        throw InvalidArgument("coefficient vector length " + std::to_string(natural.size()) + " != m*m");
    }
    if (ordering == WalshOrdering::natural) return {natural.begin(), natural.end()};
    std::vector<double> out(natural.size());
    for (std::size_t j = 0; j < natural.size(); ++j) out[j] = natural[natural_mask_index(j, m, ordering)];
    return out;
}

// Replicates each logical pixel into a (screen/m)^2 block of physical pixels.
template <typename T>
Grid<T> render_superpixel(const Grid<T>& mask, std::size_t screen) {
    const std::size_t m = mask.side();
    if (m == 0 || screen == 0 || screen % m != 0) {
        throw InvalidArgument("screen size " + std::to_string(screen) + " is not divisible by mask side " +
                              std::to_string(m));
    }
    const std::size_t block = screen / m;
    Grid<T> out(screen);
    for (std::size_t r = 0; r < screen; ++r) {
        for (std::size_t c = 0; c < screen; ++c) out(r, c) = mask(r / block, c / block);
    }
    return out;
}

// Block edge needed to cover the screen: ceil(screen / m). For 960 and m = 128
// that is 8 (7.5 rounded up); render_superpixel itself only accepts exact
// divisors.
inline std::size_t superpixel_size(std::size_t m, std::size_t screen) {
    if (m == 0 || screen == 0) throw InvalidArgument("mask side and screen size must be > 0");
    return (screen + m - 1) / m;
}

}  // namespace ghostgrover
