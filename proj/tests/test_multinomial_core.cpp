#include "multinom/multinomial_core.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace multinom;
using multinom::test::big_row;

TEST(Params, RejectsNonPositiveK) {
    EXPECT_THROW(Params(0, 3), std::domain_error);
    EXPECT_THROW(Params(-1, 3), std::domain_error);
    EXPECT_THROW(Params(1, -2), std::domain_error);
    EXPECT_NO_THROW(Params(1, 0));
}

TEST(Params, DerivedDimensionIsOdd) {
    for (std::int64_t k = 1; k <= 5; ++k) {
        for (std::int64_t n = 1; n <= 5; ++n) {
            Params const p{k, n};
            EXPECT_EQ(p.dim(), 2 * k * n + 1);
            EXPECT_EQ(p.dim() % 2, 1);
            EXPECT_GE(p.dim(), 3);
        }
    }
}

TEST(ExpandPower, SmallRows) {
    EXPECT_EQ(expand_power({1, 1}).coeffs, big_row({1, 1, 1}));
    EXPECT_EQ(expand_power({1, 2}).coeffs, big_row({1, 2, 3, 2, 1}));
    EXPECT_EQ(expand_power({2, 2}).coeffs, big_row({1, 2, 3, 4, 5, 4, 3, 2, 1}));
}

TEST(ExpandPower, ZeroPowerIsIdentityRow) {
    EXPECT_EQ(expand_power({3, 0}).coeffs, big_row({1}));
    EXPECT_EQ(expand_power({3, 0}, ExpansionRoute::squaring).coeffs, big_row({1}));
    EXPECT_EQ(central_coefficient({2, 0}), 1);
}

TEST(CentralCoefficient, Examples) {
    EXPECT_EQ(central_coefficient({1, 2}), 3);
    EXPECT_EQ(central_coefficient({3, 1}), 1);
    EXPECT_EQ(central_coefficient({1, 5}), 51);
    // brute-force polynomial expansion
    EXPECT_EQ(central_coefficient({3, 4}), 231);
}

TEST(CentralCoefficient, ExceedsSixtyFourBits) {
    // (1+x+x^2)^100 central coefficient has more than 150 bits; sanity check against the row sum bound
    auto const row = expand_power({1, 100});
    EXPECT_GT(boost::multiprecision::msb(row.central()), 64u);
    EXPECT_LT(row.central(), base_power({1, 100}));
}

TEST(LinearConvolve, HandExample) {
    auto const a = big_row({1, 1, 1});
    EXPECT_EQ(linear_convolve(a, a), big_row({1, 2, 3, 2, 1}));
    EXPECT_TRUE(linear_convolve(a, std::vector<BigInt>{}).empty());
}

TEST(MultinomialDirect, Examples) {
    EXPECT_EQ(multinomial_direct({1, 2}, 2), 3);
    EXPECT_EQ(multinomial_direct({1, 2}, 0), 1);
    EXPECT_EQ(multinomial_direct({2, 2}, 4), 5);
}

TEST(MultinomialDirect, RangeError) {
    EXPECT_THROW(multinomial_direct({1, 2}, -1), std::out_of_range);
    EXPECT_THROW(multinomial_direct({1, 2}, 5), std::out_of_range);
    EXPECT_NO_THROW(multinomial_direct({1, 2}, 4));
}

TEST(MultinomialDirect, ResourceGuard) {
    // C(40 + 8, 8) = 377348994 tuples
    EXPECT_THROW(multinomial_direct({4, 40}, 10), resource_limit_error);
    EXPECT_THROW(multinomial_direct({1, 5}, 2, /*cap=*/10), resource_limit_error);
    EXPECT_EQ(composition_count({1, 5}), 21);
}

TEST(MultinomialDirect, MatchesConvolutionOnGrid) {
    for (std::int64_t k = 1; k <= 4; ++k) {
        for (std::int64_t n = 1; n <= 12; ++n) {
            Params const p{k, n};
            auto const row = expand_power(p);
            for (std::int64_t l = 0; l <= 2 * k * n; ++l) {
                ASSERT_EQ(multinomial_direct(p, l), row[l]) << "k=" << k << " n=" << n << " l=" << l;
            }
        }
    }
}

TEST(ExpandPower, RoutesAgree) {
    for (std::int64_t k = 1; k <= 5; ++k) {
        for (std::int64_t n = 0; n <= 25; ++n) {
            Params const p{k, n};
            ASSERT_EQ(expand_power(p, ExpansionRoute::iterated).coeffs,
                      expand_power(p, ExpansionRoute::squaring).coeffs)
                << "k=" << k << " n=" << n;
        }
    }
}

TEST(ExpandPower, RowInvariantsOnRandomParams) {
    std::mt19937 rng(20240611);
    std::uniform_int_distribution<std::int64_t> kd(1, 8), nd(1, 40);
    for (int trial = 0; trial < 200; ++trial) {
        Params const p{kd(rng), nd(rng)};
        auto const row = expand_power(p);
        auto const last = 2 * p.k * p.n;
        ASSERT_EQ(static_cast<std::int64_t>(row.size()), p.dim());
        EXPECT_EQ(row[0], 1);
        EXPECT_EQ(row[last], 1);
        EXPECT_EQ(row[1], p.n);
        BigInt sum = 0;
        for (std::int64_t l = 0; l <= last; ++l) {
            ASSERT_EQ(row[l], row[last - l]);
            sum += row[l];
            // central coefficient is the largest
            ASSERT_LE(row[l], row.central());
        }
        EXPECT_EQ(sum, base_power(p));
    }
}

TEST(ExpandPower, SumOfSquaresIsCentralOfDoublePower) {
    // sum_l p_l^2 = p_{2kn}^{(2n)} since the row is symmetric
    for (std::int64_t k = 1; k <= 4; ++k) {
        for (std::int64_t n = 1; n <= 15; ++n) {
            auto const row = expand_power({k, n});
            BigInt sq = 0;
            for (auto const& c : row.coeffs) sq += c * c;
            ASSERT_EQ(sq, central_coefficient({k, 2 * n}));
        }
    }
}
