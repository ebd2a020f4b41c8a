#pragma once

/**
 * @file circulant.hpp
 * @brief Exact circulant matrices over big integers, stored by first row.
 *
 * Entry (i, j) of a circulant is first_row[(j - i) mod N]. Products of
 * circulants are cyclic convolutions of first rows, so powers stay cheap
 * to represent. The shifted boolean family A^(m) has ones at offsets
 * m, m+1, ..., m+2k (mod N) and satisfies
 *
 *   first_row(A^(m))^n = first_row(A^(0))^n rotated right by n*m,
 *
 * with first_row(A^(0))^n = [p_0, ..., p_{2kn}]. Rotating by -kn puts the
 * central coefficient on the diagonal; build_central() is that matrix,
 * with the symmetric first row (1, 1..1, 0..0, 1..1).
 */

#include "multinom/params.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace multinom {

class CirculantMatrix {
public:
    explicit CirculantMatrix(std::vector<BigInt> first_row) : row_(std::move(first_row)) {
        if (row_.empty()) throw std::invalid_argument("circulant dimension must be >= 1");
    }

    static CirculantMatrix identity(std::size_t dim) {
        std::vector<BigInt> row(dim, BigInt{0});
        row.at(0) = 1;
        return CirculantMatrix(std::move(row));
    }

    /// The cyclic permutation matrix B, a single one at offset 1.
    static CirculantMatrix permutation(std::size_t dim) {
        std::vector<BigInt> row(dim, BigInt{0});
        row.at(1 % dim) = 1;
        return CirculantMatrix(std::move(row));
    }

    [[nodiscard]] std::size_t dim() const noexcept { return row_.size(); }
    [[nodiscard]] std::vector<BigInt> const& first_row() const noexcept { return row_; }

    [[nodiscard]] BigInt const& at(std::size_t i, std::size_t j) const {
        auto const n = dim();
        return row_[(j + n - i % n) % n];
    }

    /// Cyclic convolution of first rows. Circulant products commute.
    friend CirculantMatrix operator*(CirculantMatrix const& a, CirculantMatrix const& b) {
        if (a.dim() != b.dim()) {
            throw std::invalid_argument("circulant dimensions differ: " + std::to_string(a.dim()) +
                                        " vs " + std::to_string(b.dim()));
        }
        auto const n = a.dim();
        std::vector<BigInt> out(n, BigInt{0});
        for (std::size_t i = 0; i < n; ++i) {
            if (a.row_[i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (b.row_[j] == 0) continue;
                auto idx = i + j;
                if (idx >= n) idx -= n;
                out[idx] += a.row_[i] * b.row_[j];
            }
        }
        return CirculantMatrix(std::move(out));
    }

    bool operator==(CirculantMatrix const&) const = default;

private:
    std::vector<BigInt> row_;
};

/// Boolean circulant A^(m): ones at offsets {m, ..., m+2k} mod N.
inline CirculantMatrix build_shifted(Params const& p, std::int64_t m) {
    auto const n = p.dim();
    if (m < 0 || m >= n) {
        throw std::out_of_range("shift m=" + std::to_string(m) + " outside [0, " +
                                std::to_string(n - 1) + "]");
    }
    std::vector<BigInt> row(static_cast<std::size_t>(n), BigInt{0});
    for (std::int64_t l = 0; l <= 2 * p.k; ++l) {
        row[static_cast<std::size_t>((m + l) % n)] = 1;
    }
    return CirculantMatrix(std::move(row));
}

/// Symmetric circulant with ones at offsets {-k, ..., k} mod N.
/// Its n-th power has M^(2k,n) on the diagonal.
inline CirculantMatrix build_central(Params const& p) {
    auto const n = p.dim();
    std::vector<BigInt> row(static_cast<std::size_t>(n), BigInt{0});
    for (std::int64_t l = -p.k; l <= p.k; ++l) {
        row[static_cast<std::size_t>(detail::mod(l, n))] = 1;
    }
    return CirculantMatrix(std::move(row));
}

/// Exponentiation by squaring; power 0 is the identity.
inline CirculantMatrix matrix_power(CirculantMatrix const& a, std::uint64_t e) {
    auto result = CirculantMatrix::identity(a.dim());
    auto base = a;
    for (; e > 0; e >>= 1) {
        if (e & 1) result = result * base;
        if (e > 1) base = base * base;
    }
    return result;
}

/// Every diagonal entry of a circulant is first_row[0].
inline BigInt trace(CirculantMatrix const& a) {
    return BigInt{static_cast<unsigned long>(a.dim())} * a.first_row()[0];
}

/// M^(2k,n) = Tr[(central circulant)^n] / N.
inline BigInt central_via_trace(Params const& p) {
    auto const power = matrix_power(build_central(p), static_cast<std::uint64_t>(p.n));
    auto const tr = trace(power);
    BigInt const n = p.dim();
    if (tr % n != 0) {
        throw invariant_violation("trace " + tr.str() + " not divisible by N=" + n.str());
    }
    return tr / n;
}

/// p_l^(n) read off the first row of (A^(m))^n at offset (l + n*m) mod N.
inline BigInt coefficient_via_shift(Params const& p, std::int64_t l, std::int64_t m = 0) {
    detail::check_index(p, l);
    auto const n = p.dim();
    auto const power = matrix_power(build_shifted(p, m), static_cast<std::uint64_t>(p.n));
    // n*m < N^2 <= 2^43, no overflow
    auto const offset = detail::mod(l + p.n * m, n);
    return power.first_row()[static_cast<std::size_t>(offset)];
}

}  // namespace multinom
