#pragma once

// Bi-photon Schmidt state over pixel states, the oracle object, and the
// heralded idler state that results from marking.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ghostgrover/error.hpp"
#include "ghostgrover/grid.hpp"

namespace ghostgrover {

inline constexpr double kNormTolerance = 1e-12;

enum class ProfileKind { uniform, gaussian, custom };
enum class Placement { centered, origin };

inline const char* to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::uniform: return "uniform";
        case ProfileKind::gaussian: return "gaussian";
        case ProfileKind::custom: return "custom";
    }
    return "?";
}

inline const char* to_string(Placement p) { return p == Placement::centered ? "centered" : "origin"; }

inline Placement parse_placement(const std::string& s) {
    if (s == "centered") return Placement::centered;
    if (s == "origin") return Placement::origin;
    throw InvalidArgument("unknown placement '" + s + "' (expected centered|origin)");
}

// Sub-pixel position; x is the column coordinate, y the row coordinate.
struct PixelPoint {
    double x = 0.0;
    double y = 0.0;
};

struct ProfileMeta {
    ProfileKind kind = ProfileKind::custom;
    std::size_t block_side = 0;  // uniform only
    Placement placement = Placement::centered;
    double waist = 0.0;  // gaussian only: 1/e^2 intensity radius, pixels
    PixelPoint center{};
};

// Real, nonnegative Schmidt coefficients lambda_j over the m x m pixel basis,
// normalized so that sum lambda_j^2 = 1.
class SchmidtState {
public:
    // Validates nonnegativity and normalization; throws InvalidState otherwise.
    static SchmidtState from_coefficients(Image lambda, ProfileMeta meta = {}) {
        double norm2 = 0.0;
        for (double v : lambda) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidState("Schmidt coefficients must be finite and >= 0");
            norm2 += v * v;
        }
        if (std::abs(norm2 - 1.0) > kNormTolerance) {
            throw InvalidState("Schmidt coefficients are not normalized (sum of squares = " + std::to_string(norm2) +
                               ")");
        }
        return SchmidtState(std::move(lambda), meta);
    }

    // Rescales nonnegative weights to unit norm.
    static SchmidtState normalized(Image weights, ProfileMeta meta = {}) {
        double norm2 = 0.0;
        for (double v : weights) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("Schmidt weights must be finite and >= 0");
            norm2 += v * v;
        }
        if (norm2 <= 0.0) throw InvalidArgument("Schmidt weights are all zero");
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& v : weights) v *= inv;
        return SchmidtState(std::move(weights), meta);
    }

    std::size_t side() const noexcept { return lambda_.side(); }
    std::size_t dim() const noexcept { return lambda_.size(); }
    const Image& lambda() const noexcept { return lambda_; }
    std::span<const double> coefficients() const noexcept { return lambda_.flat(); }
    const ProfileMeta& meta() const noexcept { return meta_; }

private:
    SchmidtState(Image lambda, ProfileMeta meta) : lambda_(std::move(lambda)), meta_(meta) {}

    Image lambda_;
    ProfileMeta meta_;
};

// f(j) in {0, 1}; marked pixels receive a pi phase.
struct OracleObject {
    Grid<std::uint8_t> marks;

    std::size_t side() const noexcept { return marks.side(); }
    std::size_t count() const {
        return static_cast<std::size_t>(std::count(marks.begin(), marks.end(), std::uint8_t{1}));
    }
    bool marked(std::size_t j) const { return marks[j] != 0; }
};

// o'_j = lambda_j * (-1)^f(j)
struct IdlerState {
    Image amplitudes;

    std::size_t side() const noexcept { return amplitudes.side(); }
    std::size_t dim() const noexcept { return amplitudes.size(); }
    std::span<const double> flat() const noexcept { return amplitudes.flat(); }
};

inline SchmidtState uniform_block_profile(std::size_t m, std::size_t n, Placement placement = Placement::centered) {
    if (m == 0) throw InvalidArgument("m must be positive");
    if (n < 1 || n > m) {
        throw InvalidArgument("block side n=" + std::to_string(n) + " must satisfy 1 <= n <= m=" + std::to_string(m));
    }
    if (placement == Placement::centered && (m - n) % 2 != 0) {
        throw InvalidArgument("centered placement needs m - n even (m=" + std::to_string(m) +
                              ", n=" + std::to_string(n) + ")");
    }
    const std::size_t offset = placement == Placement::centered ? (m - n) / 2 : 0;
    const double level = 1.0 / static_cast<double>(n);
    Image lambda(m, 0.0);
    for (std::size_t r = offset; r < offset + n; ++r) {
        for (std::size_t c = offset; c < offset + n; ++c) lambda(r, c) = level;
    }
    ProfileMeta meta;
    meta.kind = ProfileKind::uniform;
    meta.block_side = n;
    meta.placement = placement;
    const double mid = static_cast<double>(offset) + (static_cast<double>(n) - 1.0) / 2.0;
    meta.center = {mid, mid};
    return SchmidtState::normalized(std::move(lambda), meta);
}

inline PixelPoint grid_center(std::size_t m) {
    const double c = (static_cast<double>(m) - 1.0) / 2.0;
    return {c, c};
}

// lambda(x, y) proportional to exp(-r^2 / w^2), so lambda^2 falls to 1/e^2 at r = w.
inline SchmidtState gaussian_profile(std::size_t m, double waist, std::optional<PixelPoint> center = std::nullopt) {
    if (m == 0) throw InvalidArgument("m must be positive");
    if (!(waist > 0.0) || !std::isfinite(waist)) {
        throw InvalidArgument("waist must be positive and finite (got " + std::to_string(waist) + ")");
    }
    const PixelPoint c0 = center.value_or(grid_center(m));
    Image lambda(m, 0.0);
    const double inv_w2 = 1.0 / (waist * waist);
    for (std::size_t r = 0; r < m; ++r) {
        const double dy = static_cast<double>(r) - c0.y;
        for (std::size_t c = 0; c < m; ++c) {
            const double dx = static_cast<double>(c) - c0.x;
            lambda(r, c) = std::exp(-(dx * dx + dy * dy) * inv_w2);
        }
    }
    ProfileMeta meta;
    meta.kind = ProfileKind::gaussian;
    meta.waist = waist;
    meta.center = c0;
    return SchmidtState::normalized(std::move(lambda), meta);
}

// K = 1 / sum lambda_j^4, the participation ratio of the weights lambda_j^2.
inline double schmidt_number(std::span<const double> lambda) {
    double s2 = 0.0;
    double s4 = 0.0;
    for (double v : lambda) {
        const double p = v * v;
        s2 += p;
        s4 += p * p;
    }
    if (std::abs(s2 - 1.0) > kNormTolerance) {
        throw InvalidState("Schmidt number needs a normalized state (sum of squares = " + std::to_string(s2) + ")");
    }
    return 1.0 / s4;
}

inline double schmidt_number(const SchmidtState& state) { return schmidt_number(state.coefficients()); }

struct IntensityMoments {
    PixelPoint centroid;
    double var_x = 0.0;
    double var_y = 0.0;
};

// Centroid and per-axis variance of the intensity lambda^2 on an m x m grid.
inline IntensityMoments intensity_moments(std::span<const double> lambda, std::size_t m) {
    if (lambda.size() != m * m) throw InvalidArgument("amplitude length does not match m*m");
    double total = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
            const double p = lambda[r * m + c] * lambda[r * m + c];
            total += p;
            sx += p * static_cast<double>(c);
            sy += p * static_cast<double>(r);
        }
    }
    if (!(total > 0.0)) throw InvalidArgument("zero state has no moments");
    IntensityMoments mom;
    mom.centroid = {sx / total, sy / total};
    double vx = 0.0;
    double vy = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
            const double p = lambda[r * m + c] * lambda[r * m + c];
            const double dx = static_cast<double>(c) - mom.centroid.x;
            const double dy = static_cast<double>(r) - mom.centroid.y;
            vx += p * dx * dx;
            vy += p * dy * dy;
        }
    }
    mom.var_x = vx / total;
    mom.var_y = vy / total;
    return mom;
}

// n_eff = 2 * sqrt(omega) with omega the per-axis average second moment of
// lambda^2 about its centroid. A gaussian of waist w gives n_eff = w; a uniform
// n x n block gives 2 * sqrt((n^2 - 1) / 12), i.e. n / sqrt(3) for large n.
inline double effective_block_side(std::span<const double> lambda, std::size_t m) {
    const auto mom = intensity_moments(lambda, m);
    const double omega = 0.5 * (mom.var_x + mom.var_y);
    return 2.0 * std::sqrt(omega);
}

inline double effective_block_side(const SchmidtState& state) {
    return effective_block_side(state.coefficients(), state.side());
}

// Closed form of K for a continuous gaussian: K = pi * w^2. Used as the
// starting bracket for calibrate_waist.
inline double continuum_schmidt_number(double waist) { return std::numbers::pi * waist * waist; }

// Finds the waist at which the sampled gaussian reaches Schmidt number
// `target_k` by bisection (K increases monotonically with the waist).
inline double calibrate_waist(std::size_t m, double target_k, std::optional<PixelPoint> center = std::nullopt) {
    const double max_k = static_cast<double>(m * m);
    if (!(target_k >= 1.0) || target_k >= max_k) {
        throw InvalidArgument("target Schmidt number must lie in [1, m*m)");
    }
    auto k_of = [&](double w) { return schmidt_number(gaussian_profile(m, w, center)); };
    double lo = 1e-3;
    double hi = std::max(1.0, std::sqrt(target_k / std::numbers::pi));
    while (k_of(hi) < target_k) {
        hi *= 2.0;
        if (hi > 1e6 * static_cast<double>(m)) throw InvalidArgument("target Schmidt number not reachable on this grid");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (k_of(mid) < target_k ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Oracle as a diagonal sign flip on the marked pixels.
inline void apply_marks(std::span<double> v, const OracleObject& object) {
    if (v.size() != object.marks.size()) throw InvalidArgument("oracle size does not match state dimension");
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (object.marked(j)) v[j] = -v[j];
    }
}

inline IdlerState apply_oracle(const SchmidtState& state, const OracleObject& object) {
    if (state.side() != object.side()) {
        throw InvalidArgument("oracle object side " + std::to_string(object.side()) + " does not match state side " +
                              std::to_string(state.side()));
    }
    IdlerState idler{state.lambda()};
    apply_marks(idler.amplitudes.flat(), object);
    return idler;
}

}  // namespace ghostgrover
