#include "multinom/circulant.hpp"
#include "multinom/multinomial_core.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace multinom;
using multinom::test::big_row;

TEST(BuildShifted, Examples) {
    EXPECT_EQ(build_shifted({1, 1}, 0).first_row(), big_row({1, 1, 1}));
    EXPECT_EQ(build_shifted({1, 2}, 0).first_row(), big_row({1, 1, 1, 0, 0}));
    EXPECT_EQ(build_shifted({1, 2}, 4).first_row(), big_row({1, 1, 0, 0, 1}));
}

TEST(BuildShifted, RangeError) {
    EXPECT_THROW(build_shifted({1, 2}, 5), std::out_of_range);
    EXPECT_THROW(build_shifted({1, 2}, -1), std::out_of_range);
}

TEST(BuildShifted, ExactlyWidthOnes) {
    for (std::int64_t k = 1; k <= 3; ++k) {
        for (std::int64_t n = 1; n <= 4; ++n) {
            Params const p{k, n};
            for (std::int64_t m = 0; m < p.dim(); ++m) {
                auto const row = build_shifted(p, m).first_row();
                BigInt ones = 0;
                for (auto const& x : row) ones += x;
                ASSERT_EQ(ones, p.width());
                for (std::int64_t l = 0; l <= 2 * k; ++l) {
                    ASSERT_EQ(row[static_cast<std::size_t>((m + l) % p.dim())], 1);
                }
            }
        }
    }
}

TEST(BuildCentral, Examples) {
    EXPECT_EQ(build_central({1, 2}).first_row(), big_row({1, 1, 0, 0, 1}));
    EXPECT_EQ(build_central({2, 1}).first_row(), big_row({1, 1, 1, 1, 1}));
    EXPECT_EQ(build_central({2, 2}).first_row(), big_row({1, 1, 1, 0, 0, 0, 0, 1, 1}));
}

TEST(BuildCentral, IsShiftByMinusK) {
    for (std::int64_t k = 1; k <= 4; ++k) {
        for (std::int64_t n = 1; n <= 6; ++n) {
            Params const p{k, n};
            ASSERT_EQ(build_central(p), build_shifted(p, p.dim() - k));
            auto const row = build_central(p).first_row();
            for (std::size_t j = 1; j < row.size(); ++j) ASSERT_EQ(row[j], row[row.size() - j]);
        }
    }
}

TEST(BuildCentral, LiteralLemmaShiftDoesNotCarryCentre) {
    // m = 2kn - k read with 0-based offsets gives a non-symmetric row whose
    // trace formula yields 1 for (k=1, n=2) instead of 3
    Params const p{1, 2};
    auto const literal = build_shifted(p, 2 * p.k * p.n - p.k);
    EXPECT_EQ(literal.first_row(), big_row({1, 0, 0, 1, 1}));
    EXPECT_EQ(trace(matrix_power(literal, 2)) / p.dim(), 1);
    EXPECT_EQ(central_via_trace(p), 3);
}

TEST(MatrixPower, Examples) {
    CirculantMatrix const sym(big_row({1, 1, 0, 0, 1}));
    EXPECT_EQ(matrix_power(sym, 0).first_row(), big_row({1, 0, 0, 0, 0}));
    EXPECT_EQ(matrix_power(CirculantMatrix(big_row({1, 1, 1, 0, 0})), 2).first_row(),
              big_row({1, 2, 3, 2, 1}));
    EXPECT_EQ(matrix_power(sym, 2).first_row(), big_row({3, 2, 1, 1, 2}));
}

TEST(MatrixPower, DimensionMismatch) {
    EXPECT_THROW(CirculantMatrix(big_row({1, 0, 0})) * CirculantMatrix(big_row({1, 0})),
                 std::invalid_argument);
}

TEST(Trace, Examples) {
    EXPECT_EQ(trace(CirculantMatrix(big_row({1, 0, 0, 0, 0}))), 5);
    EXPECT_EQ(trace(CirculantMatrix(big_row({3, 2, 1, 1, 2}))), 15);
    EXPECT_EQ(trace(CirculantMatrix(big_row({1, 1, 1}))), 3);
}

TEST(CentralViaTrace, Examples) {
    EXPECT_EQ(central_via_trace({1, 2}), 3);
    EXPECT_EQ(central_via_trace({1, 1}), 1);
    EXPECT_EQ(central_via_trace({2, 2}), 5);
    EXPECT_EQ(central_via_trace({1, 0}), 1);
}

TEST(CentralViaTrace, MatchesConvolutionAndDivides) {
    for (std::int64_t k = 1; k <= 4; ++k) {
        for (std::int64_t n = 1; n <= 12; ++n) {
            Params const p{k, n};
            auto const tr = trace(matrix_power(build_central(p), static_cast<std::uint64_t>(n)));
            ASSERT_EQ(tr % p.dim(), 0) << "k=" << k << " n=" << n;
            ASSERT_EQ(central_via_trace(p), central_coefficient(p)) << "k=" << k << " n=" << n;
        }
    }
}

TEST(CoefficientViaShift, Examples) {
    EXPECT_EQ(coefficient_via_shift({1, 2}, 2), 3);
    EXPECT_EQ(coefficient_via_shift({1, 2}, 0), 1);
    EXPECT_EQ(coefficient_via_shift({2, 2}, 3), 4);
    EXPECT_THROW(coefficient_via_shift({1, 2}, 5), std::out_of_range);
}

TEST(CoefficientViaShift, EveryShiftRecoversRow) {
    for (std::int64_t k = 1; k <= 3; ++k) {
        for (std::int64_t n = 1; n <= 5; ++n) {
            Params const p{k, n};
            auto const row = expand_power(p);
            for (std::int64_t m = 0; m < p.dim(); ++m) {
                for (std::int64_t l = 0; l <= 2 * k * n; ++l) {
                    ASSERT_EQ(coefficient_via_shift(p, l, m), row[l]) << k << ' ' << n << ' ' << m << ' ' << l;
                }
            }
        }
    }
}

TEST(ShiftCovariance, PowerRotatesByNM) {
    for (std::int64_t k = 1; k <= 3; ++k) {
        for (std::int64_t n = 1; n <= 6; ++n) {
            Params const p{k, n};
            auto const base = matrix_power(build_shifted(p, 0), static_cast<std::uint64_t>(n)).first_row();
            auto const dim = static_cast<std::size_t>(p.dim());
            for (std::int64_t m = 0; m < p.dim(); ++m) {
                auto const shifted = matrix_power(build_shifted(p, m), static_cast<std::uint64_t>(n)).first_row();
                auto const rot = static_cast<std::size_t>((n * m) % p.dim());
                for (std::size_t j = 0; j < dim; ++j) {
                    ASSERT_EQ(shifted[(j + rot) % dim], base[j]);
                }
            }
        }
    }
}

TEST(PermutationBasis, Rules) {
    for (std::size_t dim : {3u, 5u, 9u, 13u}) {
        auto const b = CirculantMatrix::permutation(dim);
        auto const id = CirculantMatrix::identity(dim);
        EXPECT_EQ(matrix_power(b, dim), id);
        EXPECT_EQ(matrix_power(b, 0), id);
        for (std::uint64_t x = 0; x < 2 * dim; ++x) {
            EXPECT_EQ(matrix_power(b, x), matrix_power(b, x % dim));
            for (std::uint64_t y = 0; y < dim; ++y) {
                // exponents add under the matrix product
                ASSERT_EQ(matrix_power(b, x) * matrix_power(b, y), matrix_power(b, (x + y) % dim));
            }
        }
    }
}

TEST(CirculantProduct, Commutes) {
    CirculantMatrix const a(big_row({1, 4, 0, 2, 7}));
    CirculantMatrix const b(big_row({3, 0, 5, 1, 1}));
    EXPECT_EQ(a * b, b * a);
}

TEST(DenseOracle, MatrixPowerMatchesNaiveProduct) {
    for (std::int64_t k = 1; k <= 4; ++k) {
        for (std::int64_t n = 1; 2 * k * n + 1 <= 31; ++n) {
            Params const p{k, n};
            for (auto const& a : {build_central(p), build_shifted(p, 0), build_shifted(p, n % p.dim())}) {
                auto const fast = matrix_power(a, static_cast<std::uint64_t>(n));
                auto const slow = test::dense_power(test::dense(a), n);
                ASSERT_EQ(fast.first_row(), slow[0]) << "k=" << k << " n=" << n;
                // the dense power is itself circulant
                for (std::size_t i = 0; i < fast.dim(); ++i) {
                    for (std::size_t j = 0; j < fast.dim(); ++j) ASSERT_EQ(slow[i][j], fast.at(i, j));
                }
            }
        }
    }
}
