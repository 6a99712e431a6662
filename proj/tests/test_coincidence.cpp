#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "ghostgrover/coincidence.hpp"
#include "oracles.hpp"

using namespace ghostgrover;

namespace {

IdlerState side_two_marked_three() {
    auto obj = empty_object(2);
    obj.marks[3] = 1;
    return apply_oracle(uniform_block_profile(2, 2), obj);
}

NoiseParams budget_params(double expected_total, const ProbabilityVector& p, double singles = 0.0) {
    NoiseParams np;
    np.singles_rate_a = singles;
    np.singles_rate_b = singles;
    const double peak = *std::max_element(p.p.begin(), p.p.end());
    np.pair_rate = expected_total / (np.integration * p.total() / peak);
    return np;
}

}  // namespace

TEST(NoiseParams, Validation) {
    NoiseParams np;
    EXPECT_NO_THROW(np.validate());
    np.gate = 0.0;
    EXPECT_THROW(np.validate(), InvalidArgument);
    np = NoiseParams{};
    np.pair_rate = -1.0;
    EXPECT_THROW(np.validate(), InvalidArgument);
    np = NoiseParams{};
    np.integration = -2.0;
    EXPECT_THROW(simulate_counts(ProbabilityVector{{0.5, 0.5}}, np), InvalidArgument);
}

TEST(SimulateCounts, NoSignalCorrectedMeanIsZero) {
    NoiseParams np;
    np.pair_rate = 0.0;
    np.singles_rate_a = 2e5;
    np.singles_rate_b = 3e5;
    np.seed = 5;
    const auto counts = simulate_counts(ProbabilityVector{std::vector<double>(1000, 1e-3)}, np);
    std::vector<double> corrected;
    for (const auto& c : counts.masks) {
        corrected.push_back(c.corrected);
        EXPECT_GE(c.accidentals_est, 0.0);
        EXPECT_DOUBLE_EQ(c.corrected, static_cast<double>(c.coincidences) - c.accidentals_est);
    }
    const double mean = std::accumulate(corrected.begin(), corrected.end(), 0.0) / 1000.0;
    double var = 0.0;
    for (double v : corrected) var += (v - mean) * (v - mean);
    const double se = std::sqrt(var / 999.0 / 1000.0);
    EXPECT_LE(std::abs(mean), 3.0 * se);
}

TEST(SimulateCounts, ZeroProbabilityWithoutAccidentalsIsZero) {
    NoiseParams np;
    np.pair_rate = 1e6;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        np.seed = seed;
        const auto counts = simulate_counts(ProbabilityVector{{0.0, 0.3, 0.0, 0.7}}, np);
        EXPECT_EQ(counts.masks[0].coincidences, 0u);
        EXPECT_EQ(counts.masks[2].coincidences, 0u);
        EXPECT_GT(counts.masks[3].coincidences, 0u);
    }
}

TEST(SimulateCounts, SideTwoRatiosWithinPoissonError) {
    const auto p = ghost_probabilities(side_two_marked_three(), Convention::paper);
    NoiseParams np;
    np.pair_rate = 1e6 / np.integration;
    np.seed = 42;
    const auto counts = simulate_counts(p, np);
    double total = 0.0;
    for (const auto& c : counts.masks) total += c.corrected;
    const std::vector<double> expected{1.0 / 12, 1.0 / 12, 1.0 / 12, 9.0 / 12};
    for (std::size_t j = 0; j < 4; ++j) {
        const double sigma = std::sqrt(expected[j] * (1.0 - expected[j]) / total);
        EXPECT_NEAR(counts.masks[j].corrected / total, expected[j], 3.0 * sigma) << j;
    }
    EXPECT_NEAR(static_cast<double>(counts.masks[3].coincidences), 1e6, 3.0 * 1e3);
}

TEST(SimulateCounts, DeterministicPerSeed) {
    const auto p = ghost_probabilities(apply_oracle(gaussian_profile(16, 4.0), builtin_object("block", 16)),
                                       Convention::paper);
    NoiseParams np;
    np.singles_rate_a = 1e5;
    np.singles_rate_b = 1e5;
    np.seed = 1234;
    const auto a = simulate_counts(p, np);
    const auto b = simulate_counts(p, np);
    for (std::size_t j = 0; j < a.masks.size(); ++j) {
        EXPECT_EQ(a.masks[j].coincidences, b.masks[j].coincidences);
        EXPECT_EQ(a.masks[j].singles_a, b.masks[j].singles_a);
        EXPECT_EQ(a.masks[j].singles_b, b.masks[j].singles_b);
    }
    np.seed = 1235;
    const auto c = simulate_counts(p, np);
    bool differs = false;
    for (std::size_t j = 0; j < a.masks.size(); ++j) differs |= a.masks[j].singles_a != c.masks[j].singles_a;
    EXPECT_TRUE(differs);
}

TEST(SimulateCounts, PerMaskStreamsIndependentOfLength) {
    // Mask j's draws depend only on (seed, j), not on how many masks precede it.
    NoiseParams np;
    np.singles_rate_a = 1e4;
    np.singles_rate_b = 1e4;
    np.pair_rate = 1e3;
    const auto a = simulate_counts(ProbabilityVector{{0.2, 0.4, 0.4}}, np);
    const auto b = simulate_counts(ProbabilityVector{{0.2, 0.4, 0.4, 0.4, 0.4}}, np);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(a.masks[j].coincidences, b.masks[j].coincidences);
}

TEST(SimulateCounts, CorrectionIsUnbiased) {
    const ProbabilityVector p{{0.1, 0.4, 0.2, 0.3}};
    NoiseParams np;
    np.pair_rate = 50.0;
    np.singles_rate_a = 4e4;
    np.singles_rate_b = 5e4;
    const int trials = 10000;
    std::vector<double> sum(4, 0.0);
    std::vector<double> sum2(4, 0.0);
    for (int t = 0; t < trials; ++t) {
        np.seed = static_cast<std::uint64_t>(t) + 1;
        const auto counts = simulate_counts(p, np);
        for (std::size_t j = 0; j < 4; ++j) {
            sum[j] += counts.masks[j].corrected;
            sum2[j] += counts.masks[j].corrected * counts.masks[j].corrected;
        }
    }
    for (std::size_t j = 0; j < 4; ++j) {
        const double mean = sum[j] / trials;
        const double var = sum2[j] / trials - mean * mean;
        const double expected = np.pair_rate * np.integration * p.p[j] / 0.4;
        EXPECT_NEAR(mean, expected, 3.0 * std::sqrt(var / trials)) << j;
    }
}

TEST(EstimateProbabilities, NoiselessCountsRecoverP) {
    const ProbabilityVector p{{0.125, 0.375, 0.0, 0.5}};
    CoincidenceCounts counts;
    for (std::size_t j = 0; j < 4; ++j) {
        MaskCounts c;
        c.j = j;
        c.coincidences = static_cast<std::uint64_t>(p.p[j] * 8000);
        c.corrected = static_cast<double>(c.coincidences);
        counts.masks.push_back(c);
    }
    const auto est = estimate_probabilities(counts);
    EXPECT_EQ(est.p.p, p.p);
    for (bool c : est.clamped) EXPECT_FALSE(c);
}

TEST(EstimateProbabilities, NegativeCorrectedIsClampedAndFlagged) {
    CoincidenceCounts counts;
    counts.masks = {MaskCounts{0, 10, 0, 0, 0.0, 10.0}, MaskCounts{1, 2, 100, 100, 5.0, -3.0}};
    const auto est = estimate_probabilities(counts);
    EXPECT_EQ(est.p.p[1], 0.0);
    EXPECT_TRUE(est.clamped[1]);
    EXPECT_FALSE(est.clamped[0]);
    EXPECT_EQ(est.p.p[0], 1.0);
}

TEST(EstimateProbabilities, AllZeroRejected) {
    CoincidenceCounts counts;
    counts.masks = {MaskCounts{0, 0, 0, 0, 0.0, 0.0}, MaskCounts{1, 1, 0, 0, 2.0, -1.0}};
    EXPECT_THROW(estimate_probabilities(counts), InvalidState);
}

TEST(EstimateProbabilities, SubtractionHelpsUnderHeavyAccidentals) {
    const auto p = ghost_probabilities(apply_oracle(uniform_block_profile(8, 4), builtin_object("two-points", 8)),
                                       Convention::paper);
    const double total = p.total();
    auto np = budget_params(2e5, p, 1e6);  // ~6000 accidentals per mask
    int better = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        np.seed = static_cast<std::uint64_t>(t);
        const auto counts = simulate_counts(p, np);
        const auto on = estimate_probabilities(counts, true);
        const auto off = estimate_probabilities(counts, false);
        double l1_on = 0.0;
        double l1_off = 0.0;
        for (std::size_t j = 0; j < p.dim(); ++j) {
            l1_on += std::abs(on.p.p[j] - p.p[j] / total);
            l1_off += std::abs(off.p.p[j] - p.p[j] / total);
        }
        better += l1_on < l1_off;
    }
    EXPECT_GE(better, 95);
}

TEST(NoisyReconstruct, LargeBudgetConverges) {
    const auto idler = apply_oracle(gaussian_profile(32, 3.3), builtin_object("letter-G", 32));
    const auto p = ghost_probabilities(idler, Convention::paper);
    auto np = budget_params(1e8, p, 1e5);
    const auto r = noisy_reconstruct(idler, Convention::paper, np);
    EXPECT_GE(r.pearson, 0.999);
    EXPECT_NEAR(r.expected_signal_total, 1e8, 1e-3);
}

TEST(NoisyReconstruct, CorrelationGrowsWithBudget) {
    const auto idler = apply_oracle(gaussian_profile(32, 3.3), builtin_object("letter-G", 32));
    const auto p = ghost_probabilities(idler, Convention::paper);
    double prev = -1.0;
    for (double budget : {1e3, 1e4, 1e5, 1e6, 1e7}) {
        double mean = 0.0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto np = budget_params(budget, p, 1e5);
            np.seed = seed;
            mean += noisy_reconstruct(idler, Convention::paper, np).pearson / 5.0;
        }
        RecordProperty("pearson_" + std::to_string(static_cast<long>(budget)), std::to_string(mean));
        EXPECT_GE(mean, prev) << budget;
        prev = mean;
    }
}

TEST(NoisyReconstruct, MarkDetectionRobustAtOneMillion) {
    const auto s = uniform_block_profile(8, 4);
    const auto obj = database_center_object(s);
    const auto idler = apply_oracle(s, obj);
    const auto p = ghost_probabilities(idler, Convention::paper);
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto np = budget_params(1e6, p, 1e5);
        np.seed = seed;
        const auto r = noisy_reconstruct(idler, Convention::paper, np);
        ok += mark_detection_report(r.noisy_total, obj, s).verdict;
    }
    EXPECT_GE(ok, 198);
}

TEST(NoisyReconstruct, DeterministicPerSeed) {
    const auto idler = apply_oracle(gaussian_profile(16, 2.0), builtin_object("letter-G", 16));
    NoiseParams np;
    np.singles_rate_a = 1e5;
    np.singles_rate_b = 1e5;
    np.seed = 77;
    const auto a = noisy_reconstruct(idler, Convention::physical, np);
    const auto b = noisy_reconstruct(idler, Convention::physical, np);
    EXPECT_EQ(a.noisy_total, b.noisy_total);
}
