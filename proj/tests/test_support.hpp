#pragma once

#include "multinom/circulant.hpp"
#include "multinom/params.hpp"

#include <initializer_list>
#include <vector>

namespace multinom::test {

inline std::vector<BigInt> big_row(std::initializer_list<long> xs) {
    std::vector<BigInt> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

/// Full N x N materialisation of a circulant, entry (i, j) = first_row[(j - i) mod N].
using DenseMatrix = std::vector<std::vector<BigInt>>;

inline DenseMatrix dense(CirculantMatrix const& c) {
    auto const n = c.dim();
    DenseMatrix m(n, std::vector<BigInt>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = c.first_row()[(j + n - i) % n];
    }
    return m;
}

inline DenseMatrix dense_multiply(DenseMatrix const& a, DenseMatrix const& b) {
    auto const n = a.size();
    DenseMatrix out(n, std::vector<BigInt>(n, BigInt{0}));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < n; ++l) {
            if (a[i][l] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][l] * b[l][j];
        }
    }
    return out;
}

/// Naive repeated dense multiplication, starting from the identity.
inline DenseMatrix dense_power(DenseMatrix const& a, std::int64_t e) {
    auto const n = a.size();
    DenseMatrix out(n, std::vector<BigInt>(n, BigInt{0}));
    for (std::size_t i = 0; i < n; ++i) out[i][i] = 1;
    for (std::int64_t i = 0; i < e; ++i) out = dense_multiply(out, a);
    return out;
}

}  // namespace multinom::test
