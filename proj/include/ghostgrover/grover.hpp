#pragma once

// Grover diffusion, single-shot detection probabilities, iterated amplitude
// amplification and the tensor-product vs sequential equivalence check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ghostgrover/error.hpp"
#include "ghostgrover/photon_state.hpp"

namespace ghostgrover {

// How a probability vector is scaled.
//   paper     the closed-form expressions as written, no renormalization
//   physical  squared overlaps with unit measurement vectors
enum class Convention { paper, physical };

inline const char* to_string(Convention c) { return c == Convention::paper ? "paper" : "physical"; }

inline Convention parse_convention(const std::string& s) {
    if (s == "paper") return Convention::paper;
    if (s == "physical") return Convention::physical;
    throw InvalidArgument("unknown convention '" + s + "' (expected paper|physical)");
}

struct StateVector {
    std::vector<double> amplitudes;
    bool normalized = true;

    std::size_t dim() const noexcept { return amplitudes.size(); }
};

struct ProbabilityVector {
    std::vector<double> p;
    Convention convention = Convention::physical;

    std::size_t dim() const noexcept { return p.size(); }
    double total() const { return std::accumulate(p.begin(), p.end(), 0.0); }
};

inline StateVector to_state_vector(const IdlerState& idler) { return {idler.amplitudes.values(), true}; }

inline double l2_norm(std::span<const double> v) {
    double s = 0.0;
    for (double a : v) s += a * a;
    return std::sqrt(s);
}

// Arithmetic mean sum(a)/M; the diffusion reflects each amplitude about it.
inline double amplitude_mean(std::span<const double> a) {
    if (a.empty()) return 0.0;
    return std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
}

// <h0|a> = sum(a)/sqrt(M), the overlap with the unit uniform superposition.
inline double h0_overlap(std::span<const double> a) {
    if (a.empty()) return 0.0;
    return std::accumulate(a.begin(), a.end(), 0.0) / std::sqrt(static_cast<double>(a.size()));
}

// D = 2|h0><h0| - I, i.e. a_j -> 2 mean(a) - a_j.
inline StateVector diffusion_apply(const StateVector& v) {
    const double twice_mean = 2.0 * amplitude_mean(v.amplitudes);
    StateVector out{std::vector<double>(v.dim()), v.normalized};
    for (std::size_t j = 0; j < v.dim(); ++j) out.amplitudes[j] = twice_mean - v.amplitudes[j];
    return out;
}

// p_j = |2<o'> - o'_j|^2 with <o'> = sum o' / M. For a normalized idler this
// is already a complete physical distribution.
inline ProbabilityVector grover_probabilities(const IdlerState& idler) {
    const auto a = idler.flat();
    const double twice_mean = 2.0 * amplitude_mean(a);
    ProbabilityVector out{std::vector<double>(a.size()), Convention::physical};
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double amp = twice_mean - a[j];
        out.p[j] = amp * amp;
    }
    return out;
}

// Signed amplitudes <j|D|Psi_i>, the quantity whose square grover_probabilities reports.
inline std::vector<double> grover_amplitudes(const IdlerState& idler) {
    return diffusion_apply(to_state_vector(idler)).amplitudes;
}

// Measurement-side view: the diffusion is absorbed into the projectors
// D|j> = (2/sqrt(M))|h0> - |j>, and each outcome is the overlap of that
// projector with the idler state.
inline ProbabilityVector absorbed_basis_probabilities(const IdlerState& idler) {
    const auto psi = idler.flat();
    const double m_dim = static_cast<double>(psi.size());
    const double h0_weight = (2.0 / std::sqrt(m_dim)) * h0_overlap(psi);
    ProbabilityVector out{std::vector<double>(psi.size()), Convention::physical};
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double overlap = h0_weight - psi[j];
        out.p[j] = overlap * overlap;
    }
    return out;
}

// (D O)^k applied to the start state lambda (h0 when lambda is uniform over
// all M pixels).
inline StateVector grover_iterate(const SchmidtState& lambda, const OracleObject& object, int iterations) {
    if (iterations < 0) throw InvalidArgument("iteration count must be >= 0");
    if (lambda.side() != object.side()) throw InvalidArgument("oracle object side does not match state side");
    StateVector v{lambda.lambda().values(), true};
    for (int k = 0; k < iterations; ++k) {
        apply_marks(v.amplitudes, object);
        v = diffusion_apply(v);
    }
    return v;
}

inline double marked_probability(const StateVector& v, const OracleObject& object) {
    double s = 0.0;
    for (std::size_t j = 0; j < v.dim(); ++j) {
        if (object.marked(j)) s += v.amplitudes[j] * v.amplitudes[j];
    }
    return s;
}

// theta with sin^2(theta) = t / M.
inline double grover_angle(std::size_t dim, std::size_t marked) {
    if (dim == 0 || marked > dim) throw InvalidArgument("need 0 <= t <= M and M > 0");
    return std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(dim)));
}

// sin^2((2k + 1) theta)
inline double grover_success_law(std::size_t dim, std::size_t marked, int iterations) {
    const double s = std::sin((2.0 * iterations + 1.0) * grover_angle(dim, marked));
    return s * s;
}

// round(pi / (4 theta) - 1/2), clamped at 0. Ties round away from zero
// (std::lround), so M = 4, t = 3 gives round(0.25) = 0.
inline int optimal_iterations(std::size_t dim, std::size_t marked) {
    if (marked < 1 || marked >= dim) {
        throw InvalidArgument("optimal_iterations needs 1 <= t < M (t=" + std::to_string(marked) +
                              ", M=" + std::to_string(dim) + ")");
    }
    const double k = std::numbers::pi / (4.0 * grover_angle(dim, marked)) - 0.5;
    return static_cast<int>(std::max(0L, std::lround(k)));
}

struct ChoiJamiolkowskiReport {
    std::size_t dim = 0;
    std::vector<double> joint;       // |<h0|<j| (O x D) |Psi_si>|^2
    std::vector<double> sequential;  // |<j| D O |lambda>|^2
    double constant = 0.0;           // least-squares c in joint ~ c * sequential
    double max_abs_deviation = 0.0;  // max_j |joint_j - c sequential_j|
    double max_rel_deviation = 0.0;  // max_abs_deviation / max_j joint_j
    // Same comparison against a sequential run started from h0 instead of
    // lambda; differs from zero only for non-uniform lambda.
    double h0_start_constant = 0.0;
    double h0_start_max_rel_deviation = 0.0;
    bool proportional = false;       // max_rel_deviation <= 1e-12
};

inline constexpr std::size_t kDefaultTensorCap = std::size_t{1} << 16;

namespace detail {

struct ProportionalFit {
    double constant = 0.0;
    double max_abs = 0.0;
    double max_rel = 0.0;
};

inline ProportionalFit fit_proportional(std::span<const double> joint, std::span<const double> seq) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < joint.size(); ++j) {
        num += joint[j] * seq[j];
        den += seq[j] * seq[j];
    }
    ProportionalFit fit;
    fit.constant = den > 0.0 ? num / den : 0.0;
    double peak = 0.0;
    for (std::size_t j = 0; j < joint.size(); ++j) {
        fit.max_abs = std::max(fit.max_abs, std::abs(joint[j] - fit.constant * seq[j]));
        peak = std::max(peak, std::abs(joint[j]));
    }
    fit.max_rel = peak > 0.0 ? fit.max_abs / peak : fit.max_abs;
    return fit;
}

}  // namespace detail

// Builds the M^2-dimensional two-photon state explicitly, applies O on the
// signal and D on the idler as dense operators, and projects the signal on h0.
// Compares with the single-system sequence D O applied to lambda.
inline ChoiJamiolkowskiReport cj_equivalence_check(const SchmidtState& lambda, const OracleObject& object,
                                                   std::size_t tensor_cap = kDefaultTensorCap) {
    if (lambda.side() != object.side()) throw InvalidArgument("oracle object side does not match state side");
    const std::size_t dim = lambda.dim();
    if (dim * dim > tensor_cap) {
        throw ResourceError("two-photon tensor of " + std::to_string(dim * dim) + " amplitudes exceeds the cap of " +
                            std::to_string(tensor_cap));
    }
    const auto coeff = lambda.coefficients();

    // |Psi_si> = sum_j lambda_j |j>_s |j>_i, index s * M + i.
    std::vector<double> psi(dim * dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) psi[j * dim + j] = coeff[j];

    // Dense single-photon operators.
    std::vector<double> oracle(dim * dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) oracle[j * dim + j] = object.marked(j) ? -1.0 : 1.0;
    std::vector<double> diffusion(dim * dim, 2.0 / static_cast<double>(dim));
    for (std::size_t j = 0; j < dim; ++j) diffusion[j * dim + j] -= 1.0;

    // (O x D)|Psi> = (O x I)(I x D)|Psi>
    std::vector<double> tmp(dim * dim, 0.0);
    for (std::size_t s = 0; s < dim; ++s) {
        for (std::size_t i = 0; i < dim; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < dim; ++k) acc += diffusion[i * dim + k] * psi[s * dim + k];
            tmp[s * dim + i] = acc;
        }
    }
    std::vector<double> phi(dim * dim, 0.0);
    for (std::size_t s = 0; s < dim; ++s) {
        for (std::size_t k = 0; k < dim; ++k) {
            const double o = oracle[s * dim + k];
            if (o == 0.0) continue;
            for (std::size_t i = 0; i < dim; ++i) phi[s * dim + i] += o * tmp[k * dim + i];
        }
    }

    ChoiJamiolkowskiReport rep;
    rep.dim = dim;
    rep.joint.assign(dim, 0.0);
    const double h0 = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        double amp = 0.0;
        for (std::size_t s = 0; s < dim; ++s) amp += h0 * phi[s * dim + i];
        rep.joint[i] = amp * amp;
    }

    auto sequential_from = [&](std::vector<double> start) {
        apply_marks(start, object);
        StateVector v = diffusion_apply(StateVector{std::move(start), true});
        std::vector<double> p(dim);
        for (std::size_t j = 0; j < dim; ++j) p[j] = v.amplitudes[j] * v.amplitudes[j];
        return p;
    };
    rep.sequential = sequential_from({coeff.begin(), coeff.end()});
    const auto fit = detail::fit_proportional(rep.joint, rep.sequential);
    rep.constant = fit.constant;
    rep.max_abs_deviation = fit.max_abs;
    rep.max_rel_deviation = fit.max_rel;
    rep.proportional = fit.max_rel <= 1e-12;

    const auto seq_h0 = sequential_from(std::vector<double>(dim, h0));
    const auto fit_h0 = detail::fit_proportional(rep.joint, seq_h0);
    rep.h0_start_constant = fit_h0.constant;
    rep.h0_start_max_rel_deviation = fit_h0.max_rel;
    return rep;
}

}  // namespace ghostgrover
