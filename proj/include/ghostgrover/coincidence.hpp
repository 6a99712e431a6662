#pragma once

// Per-mask coincidence counting with Poisson statistics and accidental
// subtraction.
//
// Model: each mask's true coincidence mean is pair_rate * integration * p_j / max(p)
// (the most probable mask is taken as unit projection efficiency). Accidentals
// arrive at S_A * S_B * gate per second. Singles are drawn independently at
// their own rates, and the accidental level is estimated back from them as
// N_A * N_B * gate / integration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ghostgrover/error.hpp"
#include "ghostgrover/ghost.hpp"
#include "ghostgrover/grover.hpp"

namespace ghostgrover {

struct NoiseParams {
    double pair_rate = 1.0e5;    // counts/s at the most probable mask
    double singles_rate_a = 0.0;  // counts/s
    double singles_rate_b = 0.0;  // counts/s
    double gate = 3e-9;           // s
    double integration = 2.0;     // s per mask
    std::uint64_t seed = 1;

    void validate() const {
        auto ok_rate = [](double r) { return std::isfinite(r) && r >= 0.0; };
        if (!ok_rate(pair_rate) || !ok_rate(singles_rate_a) || !ok_rate(singles_rate_b)) {
            throw InvalidArgument("rates must be finite and >= 0");
        }
        if (!(gate > 0.0) || !std::isfinite(gate)) throw InvalidArgument("gate must be > 0");
        if (!(integration > 0.0) || !std::isfinite(integration)) throw InvalidArgument("integration must be > 0");
    }

    double accidental_mean() const { return singles_rate_a * singles_rate_b * gate * integration; }
};

struct MaskCounts {
    std::size_t j = 0;
    std::uint64_t coincidences = 0;
    std::uint64_t singles_a = 0;
    std::uint64_t singles_b = 0;
    double accidentals_est = 0.0;  // singles_a * singles_b * gate / integration
    double corrected = 0.0;        // coincidences - accidentals_est
};

struct CoincidenceCounts {
    std::vector<MaskCounts> masks;
    NoiseParams params;
    Convention convention = Convention::paper;
    double signal_scale = 0.0;  // expected true coincidences per unit p: pair_rate * integration / max(p)

    double expected_signal_total(std::span<const double> p) const {
        double s = 0.0;
        for (double v : p) s += v;
        return s * signal_scale;
    }
};

// Independent engine for mask j; serial and parallel runs see identical draws.
inline std::mt19937_64 mask_stream(std::uint64_t seed, std::size_t j) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(static_cast<std::uint64_t>(j) >> 32),
                      0x67686f73U};
    return std::mt19937_64(seq);
}

inline std::uint64_t draw_poisson(std::mt19937_64& rng, double mean) {
    if (!(mean > 0.0)) return 0;
    std::poisson_distribution<std::uint64_t> dist(mean);
    return dist(rng);
}

inline CoincidenceCounts simulate_counts(const ProbabilityVector& p, const NoiseParams& params) {
    params.validate();
    if (p.p.empty()) throw InvalidArgument("empty probability vector");
    for (double v : p.p) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("probabilities must be finite and >= 0");
    }
    const double peak = *std::max_element(p.p.begin(), p.p.end());
    CoincidenceCounts out;
    out.params = params;
    out.convention = p.convention;
    out.signal_scale = peak > 0.0 ? params.pair_rate * params.integration / peak : 0.0;
    out.masks.resize(p.p.size());
    const double acc_mean = params.accidental_mean();
    const double singles_a_mean = params.singles_rate_a * params.integration;
    const double singles_b_mean = params.singles_rate_b * params.integration;
    for (std::size_t j = 0; j < p.p.size(); ++j) {
        auto rng = mask_stream(params.seed, j);
        MaskCounts& c = out.masks[j];
        c.j = j;
        c.singles_a = draw_poisson(rng, singles_a_mean);
        c.singles_b = draw_poisson(rng, singles_b_mean);
        c.coincidences = draw_poisson(rng, out.signal_scale * p.p[j] + acc_mean);
        c.accidentals_est = static_cast<double>(c.singles_a) * static_cast<double>(c.singles_b) * params.gate /
                            params.integration;
        c.corrected = static_cast<double>(c.coincidences) - c.accidentals_est;
    }
    return out;
}

struct ProbabilityEstimate {
    ProbabilityVector p;          // sums to 1
    std::vector<bool> clamped;    // corrected count was negative and set to 0
    bool accidentals_subtracted = true;
};

inline ProbabilityEstimate estimate_probabilities(const CoincidenceCounts& counts, bool subtract_accidentals = true) {
    ProbabilityEstimate est;
    est.accidentals_subtracted = subtract_accidentals;
    est.p.convention = counts.convention;
    est.p.p.resize(counts.masks.size());
    est.clamped.assign(counts.masks.size(), false);
    double total = 0.0;
    for (std::size_t j = 0; j < counts.masks.size(); ++j) {
        const auto& c = counts.masks[j];
        double v = subtract_accidentals ? c.corrected : static_cast<double>(c.coincidences);
        if (v < 0.0) {
            v = 0.0;
            est.clamped[j] = true;
        }
        est.p.p[j] = v;
        total += v;
    }
    if (!(total > 0.0)) throw InvalidState("no positive corrected coincidences to normalize");
    for (double& v : est.p.p) v /= total;
    return est;
}

inline double pearson_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) throw InvalidArgument("pearson needs equal, non-empty inputs");
    const double n = static_cast<double>(a.size());
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        ma += a[k];
        mb += b[k];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double da = a[k] - ma;
        const double db = b[k] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

struct NoisyReconstruction {
    ReconstructedImage ideal;
    ProbabilityVector ideal_p;
    CoincidenceCounts counts;
    ProbabilityEstimate estimate;
    ProbabilityVector noisy_p;  // estimate rescaled to the ideal vector's total
    Image noisy_total;
    double pearson = 0.0;            // noisy vs ideal total image, all pixels
    double pearson_no_origin = 0.0;  // same, pixel 0 (delta spike) left out
    double expected_signal_total = 0.0;
};

inline NoisyReconstruction noisy_reconstruct(const IdlerState& idler, Convention convention, const NoiseParams& params,
                                             bool subtract_accidentals = true,
                                             WalshOrdering ordering = WalshOrdering::natural) {
    NoisyReconstruction out;
    const std::size_t m = idler.side();
    out.ideal = decompose(idler, convention, ordering);
    out.ideal_p = ghost_probabilities(idler, convention, ordering);
    out.counts = simulate_counts(out.ideal_p, params);
    out.expected_signal_total = out.counts.expected_signal_total(out.ideal_p.p);
    out.estimate = estimate_probabilities(out.counts, subtract_accidentals);
    out.noisy_p = out.estimate.p;
    const double ideal_total = out.ideal_p.total();
    for (double& v : out.noisy_p.p) v *= ideal_total;
    out.noisy_total = reconstruct(out.noisy_p, m, ordering);
    out.pearson = pearson_correlation(out.noisy_total.flat(), out.ideal.total.flat());
    out.pearson_no_origin =
        pearson_correlation(out.noisy_total.flat().subspan(1), out.ideal.total.flat().subspan(1));
    return out;
}

}  // namespace ghostgrover
