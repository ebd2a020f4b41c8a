#pragma once

/**
 * @file multinomial_core.hpp
 * @brief Exact coefficient rows of (1 + x + ... + x^{2k})^n.
 *
 *   expand_power({1, 2}) = [1, 2, 3, 2, 1]
 *   central_coefficient({1, 5}) = 51
 *
 * Two independent exact routes are provided: repeated multiplication by the
 * all-ones row (a sliding window sum) and binary exponentiation of rows with
 * schoolbook convolution. multinomial_direct enumerates the multinomial sum
 * term by term and is only meant as a small-scale oracle.
 */

#include "multinom/params.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace multinom {

/// The full row p_0 .. p_{2kn} of P(x)^n.
struct CoefficientTable {
    Params params;
    std::vector<BigInt> coeffs;

    [[nodiscard]] BigInt const& operator[](std::int64_t l) const {
        return coeffs.at(static_cast<std::size_t>(l));
    }
    [[nodiscard]] BigInt const& central() const { return (*this)[params.centre()]; }
    [[nodiscard]] std::size_t size() const noexcept { return coeffs.size(); }
};

enum class ExpansionRoute { iterated, squaring };

/// Schoolbook linear convolution, result length |a| + |b| - 1.
inline std::vector<BigInt> linear_convolve(std::span<BigInt const> a, std::span<BigInt const> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<BigInt> out(a.size() + b.size() - 1, BigInt{0});
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

namespace detail {

// row * (1 + x + ... + x^{2k}) as a running window sum
inline std::vector<BigInt> times_all_ones(std::vector<BigInt> const& row, std::int64_t k) {
    auto const width = static_cast<std::size_t>(2 * k + 1);
    std::vector<BigInt> out(row.size() + width - 1);
    BigInt window = 0;
    for (std::size_t j = 0; j < out.size(); ++j) {
        if (j < row.size()) window += row[j];
        if (j >= width) window -= row[j - width];
        out[j] = window;
    }
    return out;
}

inline std::vector<BigInt> expand_iterated(Params const& p) {
    std::vector<BigInt> row{BigInt{1}};
    for (std::int64_t i = 0; i < p.n; ++i) row = times_all_ones(row, p.k);
    return row;
}

inline std::vector<BigInt> expand_squaring(Params const& p) {
    std::vector<BigInt> result{BigInt{1}};
    std::vector<BigInt> base(static_cast<std::size_t>(p.width()), BigInt{1});
    for (std::int64_t e = p.n; e > 0; e >>= 1) {
        if (e & 1) result = linear_convolve(result, base);
        if (e > 1) base = linear_convolve(base, base);
    }
    return result;
}

}  // namespace detail

/// Exact coefficient row of P(x)^n. Both routes give identical rows.
inline CoefficientTable expand_power(Params const& p, ExpansionRoute route = ExpansionRoute::iterated) {
    auto coeffs = route == ExpansionRoute::iterated ? detail::expand_iterated(p)
                                                    : detail::expand_squaring(p);
    return CoefficientTable{p, std::move(coeffs)};
}

/// M^(2k,n), the coefficient of x^{kn}.
inline BigInt central_coefficient(Params const& p) {
    return expand_power(p).central();
}

/// Default cap on the number of composition tuples multinomial_direct may visit.
inline constexpr std::uint64_t default_enumeration_cap = 10'000'000;

/// Number of tuples (n_0, ..., n_{2k}) summing to n, i.e. C(n + 2k, 2k).
inline BigInt composition_count(Params const& p) {
    BigInt c = 1;
    auto const parts = 2 * p.k;
    for (std::int64_t i = 1; i <= parts; ++i) {
        c *= p.n + i;
        c /= i;
    }
    return c;
}

namespace detail {

struct MultinomialEnumerator {
    std::int64_t max_part;            // 2k
    std::vector<BigInt> factorial;    // 0! .. n!
    BigInt total = 0;

    // Chooses counts for parts part..max_part; `left` copies and `weight`
    // exponent remain to be distributed. `denom` is the product of chosen n_i!.
    void visit(std::int64_t part, std::int64_t left, std::int64_t weight, BigInt const& denom) {
        if (part == 0) {
            // n_0 absorbs whatever is left and contributes no weight
            if (weight == 0) total += factorial.back() / (denom * factorial[left]);
            return;
        }
        std::int64_t const most = std::min(left, weight / part);
        for (std::int64_t c = 0; c <= most; ++c) {
            auto const rest_weight = weight - c * part;
            // the remaining parts are all < part, so they can absorb at most (left - c) * (part - 1)
            if (rest_weight > (left - c) * (part - 1)) continue;
            visit(part - 1, left - c, rest_weight, denom * factorial[c]);
        }
    }
};

}  // namespace detail

/// p_l^(n) as the literal multinomial sum over tuples with sum n and weight l.
inline BigInt multinomial_direct(Params const& p, std::int64_t l,
                                 std::uint64_t cap = default_enumeration_cap) {
    detail::check_index(p, l);
    if (composition_count(p) > cap) {
        throw resource_limit_error("multinomial enumeration over " +
                                   composition_count(p).str() + " tuples exceeds cap " +
                                   std::to_string(cap));
    }
    detail::MultinomialEnumerator e{2 * p.k, {}, 0};
    e.factorial.reserve(static_cast<std::size_t>(p.n + 1));
    e.factorial.emplace_back(1);
    for (std::int64_t i = 1; i <= p.n; ++i) e.factorial.push_back(e.factorial.back() * i);
    e.visit(e.max_part, p.n, l, BigInt{1});
    return e.total;
}

}  // namespace multinom
