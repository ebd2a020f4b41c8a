#pragma once

/**
 * @file params.hpp
 * @brief Shared vocabulary: exact integers, (k, n) parameters and error types.
 *
 * Everything in this library revolves around the polynomial
 *
 *   P(x) = 1 + x + x^2 + ... + x^{2k}
 *
 * raised to the n-th power. Its coefficient row has length N = 2kn + 1,
 * which is also the dimension of the circulant matrices used to compute it.
 */

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace multinom {

using BigInt = boost::multiprecision::mpz_int;

/// Thrown by the enumeration oracle when the composition space is too large.
class resource_limit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal identity failed to hold. Indicates a bug, never bad input.
class invariant_violation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Half-degree k and power n. The polynomial has 2k+1 terms.
struct Params {
    std::int64_t k = 1;
    std::int64_t n = 1;

    Params() = default;

    // k >= 1 and n >= 0; n = 0 is the identity row [1].
    Params(std::int64_t k_, std::int64_t n_) : k(k_), n(n_) {
        if (k < 1) {
            throw std::domain_error("k must be >= 1, got " + std::to_string(k));
        }
        if (n < 0) {
            throw std::domain_error("n must be >= 0, got " + std::to_string(n));
        }
        // keeps N = 2kn+1 and every index arithmetic well inside int64
        if (k > (std::int64_t{1} << 20) || n > (std::int64_t{1} << 20)) {
            throw std::domain_error("k and n must be <= 2^20");
        }
    }

    /// Row length and circulant dimension N = 2kn + 1.
    [[nodiscard]] std::int64_t dim() const noexcept { return 2 * k * n + 1; }

    /// Index of the central coefficient, kn.
    [[nodiscard]] std::int64_t centre() const noexcept { return k * n; }

    /// Number of terms of P(x), 2k + 1.
    [[nodiscard]] std::int64_t width() const noexcept { return 2 * k + 1; }

    bool operator==(Params const&) const = default;
};

/// (2k+1)^n, exactly.
inline BigInt base_power(Params const& p) {
    BigInt r = 1;
    BigInt b = p.width();
    for (std::int64_t e = p.n; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

namespace detail {

inline void check_index(Params const& p, std::int64_t l) {
    if (l < 0 || l > 2 * p.k * p.n) {
        throw std::out_of_range("coefficient index l=" + std::to_string(l) +
                                " outside [0, " + std::to_string(2 * p.k * p.n) + "]");
    }
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
    auto r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace detail

}  // namespace multinom
