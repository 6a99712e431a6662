#pragma once

// Ghost-imaging measurement in the superposition basis q_j = (h0 - h_j)/sqrt(2),
// image synthesis from the measured probabilities, and the split of the image
// into a delta spike, the power-spectrum term S and the inverted object term.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "ghostgrover/error.hpp"
#include "ghostgrover/grid.hpp"
#include "ghostgrover/grover.hpp"
#include "ghostgrover/objects.hpp"
#include "ghostgrover/photon_state.hpp"
#include "ghostgrover/walsh.hpp"

namespace ghostgrover {

// Hadamard-domain coefficients of the idler in the state view:
// o~_j = sum_k o'_k h_jk with h_jk = +-1/sqrt(M), indexed by mask index j.
struct GhostSpectrum {
    std::size_t m = 0;
    WalshOrdering ordering = WalshOrdering::natural;
    std::vector<double> o_tilde;
    double mean_term = 0.0;  // <o'> = sum o' / M
};

inline GhostSpectrum ghost_spectrum(const IdlerState& idler, WalshOrdering ordering = WalshOrdering::natural) {
    const std::size_t m = idler.side();
    require_power_of_two(m, "m");
    auto natural = fwht(idler.flat());
    const double inv_sqrt_dim = 1.0 / std::sqrt(static_cast<double>(natural.size()));
    for (double& v : natural) v *= inv_sqrt_dim;
    GhostSpectrum spec;
    spec.m = m;
    spec.ordering = ordering;
    spec.o_tilde = from_natural_order(natural, m, ordering);
    spec.mean_term = amplitude_mean(idler.flat());
    return spec;
}

namespace detail {

// Both conventions are written as p_j = scale * (reference - o~_j)^2.
struct QuadraticForm {
    double reference = 0.0;
    double scale = 1.0;
};

inline QuadraticForm ghost_quadratic(const GhostSpectrum& spec, Convention convention) {
    if (convention == Convention::paper) return {spec.mean_term, 1.0};
    // q_j overlap: (<h0|Psi> - <h_j|Psi>) / sqrt(2), and <h0|Psi> = o~_0.
    return {spec.o_tilde.at(0), 0.5};
}

}  // namespace detail

// paper:    p_j = (<o'> - o~_j)^2
// physical: p_j = |<q_j|Psi_i>|^2 = (o~_0 - o~_j)^2 / 2, so p_0 = 0 always
inline ProbabilityVector ghost_probabilities(const IdlerState& idler, Convention convention,
                                             WalshOrdering ordering = WalshOrdering::natural) {
    const auto spec = ghost_spectrum(idler, ordering);
    const auto q = detail::ghost_quadratic(spec, convention);
    ProbabilityVector out{std::vector<double>(spec.o_tilde.size()), convention};
    for (std::size_t j = 0; j < out.p.size(); ++j) {
        const double d = q.reference - spec.o_tilde[j];
        out.p[j] = q.scale * d * d;
    }
    return out;
}

// image(x, y) = sum_j p_j h_j(x, y) with +-1 masks, via one transform.
inline Image reconstruct(std::span<const double> p, std::size_t m, WalshOrdering ordering = WalshOrdering::natural) {
    require_power_of_two(m, "m");
    if (p.size() != m * m) {
        throw InvalidArgument("probability vector has " + std::to_string(p.size()) + " entries, expected m*m = " +
                              std::to_string(m * m));
    }
    auto natural = to_natural_order(p, m, ordering);
    fwht_inplace(natural);
    return Image(m, std::move(natural));
}

inline Image reconstruct(const ProbabilityVector& p, std::size_t m, WalshOrdering ordering = WalshOrdering::natural) {
    return reconstruct(p.p, m, ordering);
}

struct ReconstructedImage {
    std::size_t m = 0;
    Convention convention = Convention::paper;
    double reference_level = 0.0;  // c in p_j = scale * (c - o~_j)^2
    double scale = 1.0;
    Image total;
    Image delta_part;   // scale * c^2 * sum_j h_j: nonzero only at pixel 0
    Image s_part;       // scale * sum_j o~_j^2 h_j
    Image object_part;  // -2 * scale * c * sum_j o~_j h_j = -2 scale c sqrt(M) o'
};

// Expands the quadratic and synthesizes each term separately; `total` comes
// from the ordinary reconstruct(ghost_probabilities) path.
inline ReconstructedImage decompose(const IdlerState& idler, Convention convention,
                                    WalshOrdering ordering = WalshOrdering::natural) {
    const std::size_t m = idler.side();
    const auto spec = ghost_spectrum(idler, ordering);
    const auto q = detail::ghost_quadratic(spec, convention);
    const std::size_t dim = spec.o_tilde.size();

    std::vector<double> ones(dim, q.scale * q.reference * q.reference);
    std::vector<double> power(dim);
    std::vector<double> linear(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        power[j] = q.scale * spec.o_tilde[j] * spec.o_tilde[j];
        linear[j] = -2.0 * q.scale * q.reference * spec.o_tilde[j];
    }

    ReconstructedImage img;
    img.m = m;
    img.convention = convention;
    img.reference_level = q.reference;
    img.scale = q.scale;
    img.delta_part = reconstruct(ones, m, ordering);
    img.s_part = reconstruct(power, m, ordering);
    img.object_part = reconstruct(linear, m, ordering);
    img.total = reconstruct(ghost_probabilities(idler, convention, ordering), m, ordering);
    return img;
}

inline double inner_product(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

struct OverlapReport {
    std::size_t m = 0;
    ProfileKind profile = ProfileKind::custom;
    Placement placement = Placement::centered;
    std::size_t n = 0;      // uniform block side
    double waist = 0.0;     // gaussian waist
    double n_eff = 0.0;     // 2 sqrt(second moment)
    double inner = 0.0;     // <O_part, S_part>
    double overlap = 0.0;   // |inner| / (|O_part| |S_part|), 0 if either norm vanishes
    bool valid = true;      // false for sweep cells that cannot be built (e.g. n > m)
};

inline OverlapReport overlap(const ReconstructedImage& img) {
    OverlapReport rep;
    rep.m = img.m;
    rep.inner = inner_product(img.object_part.flat(), img.s_part.flat());
    const double no = l2_norm(img.object_part.flat());
    const double ns = l2_norm(img.s_part.flat());
    rep.overlap = (no > 0.0 && ns > 0.0) ? std::min(1.0, std::abs(rep.inner) / (no * ns)) : 0.0;
    return rep;
}

// Single marked pixel nearest the profile's center (rounding half up).
inline OracleObject database_center_object(const SchmidtState& state) {
    const std::size_t m = state.side();
    const auto c = state.meta().center;
    auto to_index = [m](double v) {
        const auto k = static_cast<long>(std::floor(v + 0.5));
        return static_cast<std::size_t>(std::clamp<long>(k, 0, static_cast<long>(m) - 1));
    };
    OracleObject obj = empty_object(m);
    obj.marks(to_index(c.y), to_index(c.x)) = 1;
    return obj;
}

struct SweepSpec {
    std::vector<std::size_t> m_list;
    std::vector<std::size_t> n_list;   // uniform profile
    std::vector<double> waist_list;    // gaussian profile
    ProfileKind profile = ProfileKind::uniform;
    Placement placement = Placement::centered;
    // Builds the marked object for a given database; defaults to database_center_object.
    std::function<OracleObject(const SchmidtState&)> object_rule;
    Convention convention = Convention::paper;
    std::size_t max_m = 512;
    unsigned threads = 1;
};

// Rows follow m_list, columns follow n_list (uniform) or waist_list (gaussian).
// Cells that cannot be built are returned with valid = false.
inline std::vector<std::vector<OverlapReport>> sweep_overlap(const SweepSpec& spec) {
    if (spec.profile == ProfileKind::custom) throw InvalidArgument("sweep needs a uniform or gaussian profile");
    for (std::size_t m : spec.m_list) {
        require_power_of_two(m, "m");
        if (m > spec.max_m) {
            throw ResourceError("sweep m=" + std::to_string(m) + " exceeds the cap of " + std::to_string(spec.max_m));
        }
    }
    const bool uniform = spec.profile == ProfileKind::uniform;
    const std::size_t cols = uniform ? spec.n_list.size() : spec.waist_list.size();
    const auto rule = spec.object_rule ? spec.object_rule : database_center_object;

    auto cell = [&](std::size_t row, std::size_t col) {
        const std::size_t m = spec.m_list[row];
        OverlapReport rep;
        rep.m = m;
        rep.profile = spec.profile;
        rep.placement = spec.placement;
        std::optional<SchmidtState> state;
        if (uniform) {
            rep.n = spec.n_list[col];
            const bool buildable = rep.n >= 1 && rep.n <= m &&
                                   (spec.placement == Placement::origin || (m - rep.n) % 2 == 0);
            if (!buildable) {
                rep.valid = false;
                return rep;
            }
            state = uniform_block_profile(m, rep.n, spec.placement);
        } else {
            rep.waist = spec.waist_list[col];
            state = gaussian_profile(m, rep.waist);
        }
        rep.n_eff = effective_block_side(*state);
        const auto img = decompose(apply_oracle(*state, rule(*state)), spec.convention);
        const auto ov = overlap(img);
        rep.inner = ov.inner;
        rep.overlap = ov.overlap;
        return rep;
    };

    std::vector<std::vector<OverlapReport>> grid(spec.m_list.size(), std::vector<OverlapReport>(cols));
    const std::size_t total = spec.m_list.size() * cols;
    const unsigned workers = std::max(1U, std::min<unsigned>(spec.threads, static_cast<unsigned>(total)));
    if (workers <= 1) {
        for (std::size_t k = 0; k < total; ++k) grid[k / cols][k % cols] = cell(k / cols, k % cols);
        return grid;
    }
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t k = w; k < total; k += workers) grid[k / cols][k % cols] = cell(k / cols, k % cols);
        }));
    }
    for (auto& j : jobs) j.get();
    return grid;
}

struct MarkDetectionReport {
    double min_marked = std::numeric_limits<double>::quiet_NaN();
    double max_unmarked = std::numeric_limits<double>::quiet_NaN();
    std::size_t marked_count = 0;
    std::size_t unmarked_support_count = 0;
    double support_threshold = 0.0;  // fraction of max lambda
    bool verdict = false;            // min_marked > 0 > max_unmarked
    std::string note;
};

inline constexpr double kDefaultSupportThreshold = 0.05;

// Compares marked pixels against unmarked pixels inside the lambda support
// (lambda_j >= threshold * max lambda); pixel 0 carries the delta spike and is
// excluded.
inline MarkDetectionReport mark_detection_report(const Image& image, const OracleObject& object,
                                                 const SchmidtState& support,
                                                 double threshold = kDefaultSupportThreshold) {
    if (image.side() != object.side() || image.side() != support.side()) {
        throw InvalidArgument("image, object and support sides differ");
    }
    MarkDetectionReport rep;
    rep.support_threshold = threshold;
    const auto lambda = support.coefficients();
    const double cutoff = threshold * *std::max_element(lambda.begin(), lambda.end());
    double min_marked = std::numeric_limits<double>::infinity();
    double max_unmarked = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < image.size(); ++j) {
        if (object.marked(j)) {
            ++rep.marked_count;
            min_marked = std::min(min_marked, image[j]);
        } else if (lambda[j] >= cutoff && lambda[j] > 0.0) {
            ++rep.unmarked_support_count;
            max_unmarked = std::max(max_unmarked, image[j]);
        }
    }
    if (rep.marked_count == 0) {
        rep.note = "no marked pixels outside the origin; verdict is vacuously false";
        return rep;
    }
    rep.min_marked = min_marked;
    if (rep.unmarked_support_count == 0) {
        rep.note = "no unmarked pixels inside the support";
        rep.verdict = min_marked > 0.0;
        return rep;
    }
    rep.max_unmarked = max_unmarked;
    rep.verdict = min_marked > 0.0 && 0.0 > max_unmarked;
    return rep;
}

inline MarkDetectionReport mark_detection_report(const ReconstructedImage& img, const OracleObject& object,
                                                 const SchmidtState& support,
                                                 double threshold = kDefaultSupportThreshold) {
    return mark_detection_report(img.total, object, support, threshold);
}

}  // namespace ghostgrover
