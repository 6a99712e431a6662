#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "ghostgrover/walsh.hpp"
#include "oracles.hpp"

using namespace ghostgrover;

namespace {

std::vector<double> as_double(const std::vector<int>& v) { return {v.begin(), v.end()}; }

std::vector<double> flat_mask(const WalshMask& mask) { return {mask.values.begin(), mask.values.end()}; }

}  // namespace

TEST(Walsh1d, FirstFunctionIsAllOnes) {
    EXPECT_EQ(walsh_1d(0, 4, WalshOrdering::natural), (std::vector<int>{1, 1, 1, 1}));
}

TEST(Walsh1d, OrderTwoHadamardRow) { EXPECT_EQ(walsh_1d(1, 2), (std::vector<int>{1, -1})); }

TEST(Walsh1d, SequencyIndexCountsSignChanges) {
    // Oracle: the Sylvester row of m=4 with exactly three sign changes.
    const auto h = oracle::sylvester(4);
    const auto row = *std::find_if(h.begin(), h.end(), [](const auto& r) { return oracle::sign_changes(r) == 3; });
    EXPECT_EQ(as_double(walsh_1d(3, 4, WalshOrdering::sequency)), row);
    EXPECT_EQ(walsh_1d(3, 4, WalshOrdering::sequency), (std::vector<int>{1, -1, 1, -1}));
}

TEST(Walsh1d, SequencyOrderMatchesSignChangeCountForAllRows) {
    for (std::size_t m : {2u, 4u, 8u, 16u, 64u}) {
        for (std::size_t u = 0; u < m; ++u) {
            EXPECT_EQ(oracle::sign_changes(as_double(walsh_1d(u, m, WalshOrdering::sequency))), static_cast<int>(u));
        }
    }
}

TEST(Walsh1d, Orthogonality) {
    for (auto ord : {WalshOrdering::natural, WalshOrdering::sequency}) {
        const std::size_t m = 16;
        for (std::size_t u = 0; u < m; ++u) {
            for (std::size_t v = 0; v < m; ++v) {
                const auto a = walsh_1d(u, m, ord);
                const auto b = walsh_1d(v, m, ord);
                int dot = 0;
                for (std::size_t x = 0; x < m; ++x) dot += a[x] * b[x];
                EXPECT_EQ(dot, u == v ? static_cast<int>(m) : 0);
            }
        }
    }
}

TEST(Walsh1d, RejectsBadArguments) {
    EXPECT_THROW(walsh_1d(0, 3), InvalidArgument);
    EXPECT_THROW(walsh_1d(4, 4), InvalidArgument);
    EXPECT_THROW(walsh_1d(0, 0), InvalidArgument);
}

TEST(Mask2d, ZeroIsAllOnes) {
    const auto mask = mask_2d(0, 2);
    EXPECT_TRUE(std::all_of(mask.values.begin(), mask.values.end(), [](auto v) { return v == 1; }));
}

TEST(Mask2d, IndexThreeAtSideTwo) {
    const auto mask = mask_2d(3, 2);
    EXPECT_EQ(mask.values(0, 0), 1);
    EXPECT_EQ(mask.values(0, 1), -1);
    EXPECT_EQ(mask.values(1, 0), -1);
    EXPECT_EQ(mask.values(1, 1), 1);
}

TEST(Mask2d, OuterProductOracle) {
    EXPECT_EQ(flat_mask(mask_2d(5, 4)), oracle::mask_outer(5, 4));
    const auto w = walsh_1d(1, 4);
    const auto mask = mask_2d(5, 4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(mask.values(r, c), w[r] * w[c]);
}

TEST(Mask2d, FlattenedMaskIsHadamardRow) {
    const std::size_t m = 8;
    const auto h = oracle::sylvester(m * m);
    for (std::size_t j = 0; j < m * m; ++j) EXPECT_EQ(flat_mask(mask_2d(j, m)), h[j]) << "j=" << j;
}

TEST(Mask2d, AllPairsOrthogonalUpToSixteen) {
    for (std::size_t m : {2u, 4u, 8u, 16u}) {
        const std::size_t dim = m * m;
        std::vector<std::vector<double>> masks;
        for (std::size_t j = 0; j < dim; ++j) masks.push_back(flat_mask(mask_2d(j, m, WalshOrdering::sequency)));
        for (std::size_t a = 0; a < dim; ++a) {
            for (std::size_t b = a; b < dim; ++b) {
                double dot = 0.0;
                for (std::size_t k = 0; k < dim; ++k) dot += masks[a][k] * masks[b][k];
                ASSERT_EQ(dot, a == b ? static_cast<double>(dim) : 0.0) << "m=" << m << " " << a << "," << b;
            }
        }
    }
}

TEST(Mask2d, RandomPairsOrthogonalAt128) {
    std::mt19937_64 rng(7);
    const std::size_t m = 128;
    std::uniform_int_distribution<std::size_t> pick(0, m * m - 1);
    for (int t = 0; t < 40; ++t) {
        const auto a = pick(rng);
        const auto b = pick(rng);
        const auto ma = mask_2d(a, m);
        const auto mb = mask_2d(b, m);
        long dot = 0;
        for (std::size_t k = 0; k < m * m; ++k) dot += ma.values[k] * mb.values[k];
        EXPECT_EQ(dot, a == b ? static_cast<long>(m * m) : 0L);
    }
}

TEST(Mask2d, CompletenessGivesDeltaAtOrigin) {
    for (auto ord : {WalshOrdering::natural, WalshOrdering::sequency}) {
        const std::size_t m = 8;
        std::vector<long> sum(m * m, 0);
        for (std::size_t j = 0; j < m * m; ++j) {
            const auto mask = mask_2d(j, m, ord);
            for (std::size_t k = 0; k < m * m; ++k) sum[k] += mask.values[k];
        }
        EXPECT_EQ(sum[0], static_cast<long>(m * m));
        for (std::size_t k = 1; k < m * m; ++k) EXPECT_EQ(sum[k], 0);
    }
}

TEST(Mask2d, OrderingsArePermutationsOfEachOther) {
    const std::size_t m = 8;
    std::multiset<std::vector<double>> natural;
    std::multiset<std::vector<double>> sequency;
    for (std::size_t j = 0; j < m * m; ++j) {
        natural.insert(flat_mask(mask_2d(j, m, WalshOrdering::natural)));
        sequency.insert(flat_mask(mask_2d(j, m, WalshOrdering::sequency)));
    }
    EXPECT_EQ(natural, sequency);
}

TEST(Mask2d, RejectsIndexOutOfRange) { EXPECT_THROW(mask_2d(16, 4), InvalidArgument); }

TEST(SuperpositionMask, ZeroIndexIsNull) {
    const auto q = superposition_mask(0, 2);
    for (double v : q.values) EXPECT_EQ(v, 0.0);
}

TEST(SuperpositionMask, SideTwoExamples) {
    const double r2 = std::numbers::sqrt2;
    const auto q3 = superposition_mask(3, 2);
    EXPECT_EQ(q3.values.values(), (std::vector<double>{0.0, r2, r2, 0.0}));
    const auto q1 = superposition_mask(1, 2);
    EXPECT_EQ(q1.values.values(), (std::vector<double>{0.0, r2, 0.0, r2}));
}

TEST(SuperpositionMask, EntriesAreZeroOrRootTwo) {
    for (std::size_t j = 0; j < 64; ++j) {
        const auto q = superposition_mask(j, 8, WalshOrdering::sequency);
        for (double v : q.values) EXPECT_TRUE(v == 0.0 || v == std::numbers::sqrt2);
    }
}

TEST(Fwht, UnitImpulseGivesFirstColumn) {
    EXPECT_EQ(fwht(std::vector<double>{1, 0, 0, 0}), (std::vector<double>{1, 1, 1, 1}));
}

TEST(Fwht, InvolutionUpToLength) {
    std::mt19937_64 rng(11);
    for (std::size_t n : {1u, 2u, 8u, 256u}) {
        const auto v = oracle::random_vector(rng, n);
        auto twice = fwht(fwht(v));
        for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(twice[k], static_cast<double>(n) * v[k], 1e-12);
    }
}

TEST(Fwht, MatchesNaiveMatrixProduct) {
    std::mt19937_64 rng(3);
    for (std::size_t n = 1; n <= 1024; n *= 2) {
        const auto v = oracle::random_vector(rng, n);
        const auto expected = oracle::matvec(oracle::sylvester(n), v);
        EXPECT_LE(oracle::max_abs_diff(fwht(v), expected), 1e-12) << "n=" << n;
    }
}

TEST(Fwht, RejectsNonPowerOfTwo) {
    std::vector<double> v(6, 1.0);
    EXPECT_THROW(fwht(v), InvalidArgument);
}

TEST(NaturalOrder, PermutationRoundTrip) {
    std::mt19937_64 rng(5);
    const auto v = oracle::random_vector(rng, 64);
    EXPECT_EQ(from_natural_order(to_natural_order(v, 8, WalshOrdering::sequency), 8, WalshOrdering::sequency), v);
}

TEST(Superpixel, PaperScreenSizes) {
    EXPECT_EQ(superpixel_size(32, 960), 30u);
    EXPECT_EQ(superpixel_size(64, 960), 15u);
    EXPECT_EQ(superpixel_size(128, 960), 8u);
    const auto big = render_superpixel(mask_2d(7, 32).values, 960);
    EXPECT_EQ(big.side(), 960u);
    EXPECT_EQ(big(29, 29), big(0, 0));
    EXPECT_THROW(render_superpixel(mask_2d(7, 128).values, 960), InvalidArgument);
}

TEST(Superpixel, AllOnesReplicates) {
    const auto out = render_superpixel(Grid<int>(2, 1), 4);
    EXPECT_EQ(out, Grid<int>(4, 1));
}

TEST(Superpixel, BlockDownsamplingRecoversInput) {
    const auto q = superposition_mask(13, 8).values;
    const auto big = render_superpixel(q, 40);
    for (std::size_t r = 0; r < 8; ++r) {
        for (std::size_t c = 0; c < 8; ++c) {
            double acc = 0.0;
            for (std::size_t a = 0; a < 5; ++a)
                for (std::size_t b = 0; b < 5; ++b) acc += big(r * 5 + a, c * 5 + b);
            EXPECT_DOUBLE_EQ(acc / 25.0, q(r, c));
        }
    }
}

TEST(Superpixel, RejectsNonDivisibleScreen) {
    EXPECT_THROW(render_superpixel(Grid<int>(3, 1), 10), InvalidArgument);
    EXPECT_THROW(superpixel_size(0, 960), InvalidArgument);
}
