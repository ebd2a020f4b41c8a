#pragma once

/**
 * @file spectral.hpp
 * @brief Coefficients of P(x)^n as finite trigonometric sums.
 *
 * The symmetric circulant from build_central() is real symmetric, so its
 * spectrum is real:
 *
 *   E_1 = 2k+1,   E_r = sin((2k+1)(r-1)pi/N) / sin((r-1)pi/N),  r = 2..N
 *
 * and E_r = E_{N+2-r}. Diagonalising its n-th power gives
 *
 *   p_l = (1/N) [ (2k+1)^n + sum_{r=1}^{N-1} E_{r+1}^n cos(2 pi r (l - kn) / N) ]
 *
 * and in particular the central coefficient at l = kn, where every cosine is 1.
 *
 * The sums are evaluated in floating point and rounded to the nearest
 * integer. A result is certified only when the distance to that integer
 * plus an a-priori bound on the accumulated rounding error stays below
 * the policy's residual cap. Otherwise evaluation escalates
 * double -> compensated double -> MPFR at required_bits().
 */

#include "multinom/detail/mpfr_real.hpp"
#include "multinom/detail/summation.hpp"
#include "multinom/params.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace multinom {

// ---------------------------------------------------------------------------
// Eigenvalues
// ---------------------------------------------------------------------------

enum class EigenMethod { trig_ratio, cosine_sum, chebyshev };

inline std::string_view to_string(EigenMethod m) {
    switch (m) {
        case EigenMethod::trig_ratio: return "trig-ratio";
        case EigenMethod::cosine_sum: return "cosine-sum";
        case EigenMethod::chebyshev: return "chebyshev";
    }
    return "?";
}

namespace detail {

__extension__ typedef unsigned __int128 u128;

// Reduces a/N (as a multiple of pi) into [0, 1/2] and returns the sign that
// sin(pi*a/N) picks up on the way. Small arguments keep sin well conditioned.
inline std::pair<std::uint64_t, int> reduce_sin_pi(u128 a, std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(a % (u128{2} * n));
    int sign = 1;
    if (r >= n) {
        r -= n;
        sign = -1;
    }
    if (2 * r > n) r = n - r;
    return {r, sign};
}

/// sin(pi * a / N)
inline double sin_pi_ratio(u128 a, std::uint64_t n) {
    auto const [r, sign] = reduce_sin_pi(a, n);
    return sign * std::sin(std::numbers::pi * (static_cast<double>(r) / static_cast<double>(n)));
}

/// cos(2 pi * a / N)
inline double cos_2pi_ratio(u128 a, std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(a % n);
    if (2 * r > n) r = n - r;
    return std::cos(2.0 * std::numbers::pi * (static_cast<double>(r) / static_cast<double>(n)));
}

}  // namespace detail

/// U_m(x) by the three-term recurrence U_{j+1} = 2x U_j - U_{j-1}.
inline double chebyshev_u(std::int64_t m, double x) {
    if (m == 0) return 1.0;
    double prev = 1.0;
    double cur = 2.0 * x;
    for (std::int64_t j = 1; j < m; ++j) {
        double const next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// D_k(theta) = sin((2k+1) theta / 2) / sin(theta / 2), equal to 2k+1 at theta = 0 (mod 2 pi).
inline double dirichlet_kernel(std::int64_t k, double theta) {
    double const half = std::sin(theta / 2.0);
    if (std::abs(half) < 1e-6) {
        // near the removable singularity use the equivalent 1 + 2 sum cos(j theta)
        double s = 1.0;
        for (std::int64_t j = 1; j <= k; ++j) s += 2.0 * std::cos(static_cast<double>(j) * theta);
        return s;
    }
    return std::sin(static_cast<double>(2 * k + 1) * theta / 2.0) / half;
}

/// E_r of the symmetric central circulant, r in [1, N] (1-based).
inline double eigenvalue(Params const& p, std::int64_t r, EigenMethod method = EigenMethod::trig_ratio) {
    auto const n = static_cast<std::uint64_t>(p.dim());
    if (r < 1 || r > p.dim()) {
        throw std::out_of_range("eigenvalue index r=" + std::to_string(r) + " outside [1, " +
                                std::to_string(p.dim()) + "]");
    }
    if (r == 1) return static_cast<double>(p.width());
    auto const s = static_cast<std::uint64_t>(r - 1);
    switch (method) {
        case EigenMethod::trig_ratio:
            return detail::sin_pi_ratio(detail::u128{static_cast<std::uint64_t>(p.width())} * s, n) /
                   detail::sin_pi_ratio(s, n);
        case EigenMethod::cosine_sum: {
            double e = 1.0;
            for (std::int64_t l = 1; l <= p.k; ++l) {
                e += 2.0 * detail::cos_2pi_ratio(detail::u128{s} * static_cast<std::uint64_t>(l), n);
            }
            return e;
        }
        case EigenMethod::chebyshev:
            return chebyshev_u(2 * p.k, std::cos(std::numbers::pi * (static_cast<double>(s) /
                                                                     static_cast<double>(n))));
    }
    throw std::invalid_argument("unknown eigenvalue method");
}

struct EigenvalueSet {
    Params params;
    std::vector<double> values;  // values[r-1] = E_r
    EigenMethod method = EigenMethod::trig_ratio;

    /// 1-based access, matching E_r.
    [[nodiscard]] double at(std::int64_t r) const { return values.at(static_cast<std::size_t>(r - 1)); }
};

inline EigenvalueSet eigenvalues(Params const& p, EigenMethod method = EigenMethod::trig_ratio) {
    EigenvalueSet set{p, {}, method};
    set.values.reserve(static_cast<std::size_t>(p.dim()));
    for (std::int64_t r = 1; r <= p.dim(); ++r) set.values.push_back(eigenvalue(p, r, method));
    return set;
}

// ---------------------------------------------------------------------------
// Precision policy and certification
// ---------------------------------------------------------------------------

enum class Strategy { plain_double, compensated_double, arbitrary };

inline std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::plain_double: return "double";
        case Strategy::compensated_double: return "compensated";
        case Strategy::arbitrary: return "arbitrary";
    }
    return "?";
}

inline std::optional<Strategy> parse_strategy(std::string_view s) {
    if (s == "double") return Strategy::plain_double;
    if (s == "compensated" || s == "compensated-double") return Strategy::compensated_double;
    if (s == "arbitrary") return Strategy::arbitrary;
    return std::nullopt;
}

struct PrecisionPolicy {
    Strategy strategy = Strategy::plain_double;
    // Only read for Strategy::arbitrary. Values below required_bits() are
    // raised to it; 0 means "use required_bits()".
    std::uint32_t mantissa_bits = 0;
    double residual_cap = 0.25;

    void validate() const {
        if (!(residual_cap > 0.0 && residual_cap < 0.5)) {
            throw std::invalid_argument("residual_cap must lie in (0, 0.5), got " +
                                        std::to_string(residual_cap));
        }
    }
};

/// Largest required_bits() a double-based strategy may certify.
inline constexpr std::uint32_t double_budget_bits = 52;

/// ceil(n log2(2k+1)) + ceil(log2(2kn+1)) + 32 guard bits, computed exactly.
inline std::uint32_t required_bits(Params const& p) {
    auto ceil_log2 = [](BigInt const& x) -> std::uint32_t {
        if (x <= 1) return 0;
        BigInt const y = x - 1;
        return static_cast<std::uint32_t>(boost::multiprecision::msb(y)) + 1;
    };
    return ceil_log2(base_power(p)) + ceil_log2(BigInt{p.dim()}) + 32;
}

struct CertifiedInteger {
    BigInt value;
    // distance of the quotient from `value` plus the rounding-error bound
    double residual = 0.0;
    PrecisionPolicy policy_used;
    int escalations = 0;
};

class certification_failure : public std::runtime_error {
public:
    certification_failure(std::string const& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// One uncertified evaluation of the spectral sum at a given strategy.
struct SpectralAttempt {
    BigInt value;
    double distance = 0.0;     // |q - round(q)|
    double error_bound = 0.0;  // a-priori bound on |q - q_exact|
    [[nodiscard]] double residual() const noexcept { return distance + error_bound; }
};

namespace detail {

// Per-term relative error budget for E^n * cos(.), in units of the working
// unit roundoff: the two sines and the ratio cost a few ulps each, raising
// to the n-th power multiplies that by n, and the cosine adds a few more.
inline double term_error_factor(std::int64_t n) { return 10.0 * static_cast<double>(n) + 12.0; }

inline SpectralAttempt attempt_double(Params const& p, std::int64_t offset, bool compensated) {
    auto const dim = static_cast<std::uint64_t>(p.dim());
    double const u = std::numeric_limits<double>::epsilon() / 2;
    double const nd = static_cast<double>(p.n);
    auto const width = static_cast<std::uint64_t>(p.width());
    auto const j = static_cast<std::uint64_t>(mod(offset, p.dim()));

    double const lead = std::pow(static_cast<double>(width), nd);
    CompensatedSum comp;
    double naive = 0.0;
    auto add = [&](double t) {
        if (compensated) comp.add(t); else naive += t;
    };
    add(lead);
    double abs_terms = 0.0;
    for (std::uint64_t r = 1; r < dim; ++r) {
        double const e = sin_pi_ratio(u128{width} * r, dim) / sin_pi_ratio(r, dim);
        double const en = std::pow(e, nd);
        double const c = j == 0 ? 1.0 : cos_2pi_ratio(u128{r} * j, dim);
        add(en * c);
        abs_terms += std::abs(en);
    }
    double const sum = compensated ? comp.value() : naive;
    double const abs_all = lead + abs_terms;
    double const dimd = static_cast<double>(dim);
    double const sum_error = compensated ? (2.0 * u + dimd * u * u) * abs_all : dimd * u * abs_all;
    double const q = sum / dimd;
    double const bound = (u * lead + term_error_factor(p.n) * u * abs_terms + sum_error) / dimd +
                         u * std::abs(q);

    SpectralAttempt a;
    if (!std::isfinite(q) || !std::isfinite(bound)) {
        a.distance = std::numeric_limits<double>::infinity();
        a.error_bound = std::numeric_limits<double>::infinity();
        return a;
    }
    double const rounded = std::nearbyint(q);
    a.value = BigInt(rounded);
    a.distance = std::abs(q - rounded);
    a.error_bound = bound;
    return a;
}

inline void sin_pi_ratio(MpfrReal& out, MpfrReal const& pi, u128 a, std::uint64_t n) {
    auto const [r, sign] = reduce_sin_pi(a, n);
    mpfr_mul_ui(out.get(), pi.get(), r, MPFR_RNDN);
    mpfr_div_ui(out.get(), out.get(), n, MPFR_RNDN);
    mpfr_sin(out.get(), out.get(), MPFR_RNDN);
    if (sign < 0) mpfr_neg(out.get(), out.get(), MPFR_RNDN);
}

inline void cos_2pi_ratio(MpfrReal& out, MpfrReal const& pi, u128 a, std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(a % n);
    if (2 * r > n) r = n - r;
    mpfr_mul_ui(out.get(), pi.get(), 2 * r, MPFR_RNDN);
    mpfr_div_ui(out.get(), out.get(), n, MPFR_RNDN);
    mpfr_cos(out.get(), out.get(), MPFR_RNDN);
}

inline SpectralAttempt attempt_mpfr(Params const& p, std::int64_t offset, std::uint32_t bits) {
    auto const dim = static_cast<std::uint64_t>(p.dim());
    auto const n = static_cast<unsigned long>(p.n);
    auto const width = static_cast<std::uint64_t>(p.width());
    auto const j = static_cast<std::uint64_t>(mod(offset, p.dim()));
    auto const prec = static_cast<mpfr_prec_t>(bits);
    // the accumulator carries log2(N) + 2 extra bits so N additions cost < 1 ulp at `prec`
    auto const acc_prec = prec + static_cast<mpfr_prec_t>(std::bit_width(dim)) + 2;
    constexpr mpfr_prec_t bound_prec = 64;

    MpfrReal pi(prec);
    mpfr_const_pi(pi.get(), MPFR_RNDN);

    MpfrReal acc(acc_prec);
    mpfr_ui_pow_ui(acc.get(), width, n, MPFR_RNDN);
    MpfrReal lead(bound_prec);
    mpfr_set(lead.get(), acc.get(), MPFR_RNDU);
    MpfrReal abs_terms(bound_prec, 0);

    MpfrReal num(prec), den(prec), c(prec), absval(bound_prec);
    for (std::uint64_t r = 1; r < dim; ++r) {
        sin_pi_ratio(num, pi, u128{width} * r, dim);
        sin_pi_ratio(den, pi, r, dim);
        mpfr_div(num.get(), num.get(), den.get(), MPFR_RNDN);
        mpfr_pow_ui(num.get(), num.get(), n, MPFR_RNDN);
        mpfr_abs(absval.get(), num.get(), MPFR_RNDU);
        mpfr_add(abs_terms.get(), abs_terms.get(), absval.get(), MPFR_RNDU);
        if (j != 0) {
            cos_2pi_ratio(c, pi, u128{r} * j, dim);
            mpfr_mul(num.get(), num.get(), c.get(), MPFR_RNDN);
        }
        mpfr_add(acc.get(), acc.get(), num.get(), MPFR_RNDN);
    }
    mpfr_div_ui(acc.get(), acc.get(), dim, MPFR_RNDN);

    MpfrReal rounded(acc_prec);
    mpfr_rint(rounded.get(), acc.get(), MPFR_RNDN);
    MpfrReal diff(acc_prec);
    mpfr_sub(diff.get(), acc.get(), rounded.get(), MPFR_RNDN);
    mpfr_abs(diff.get(), diff.get(), MPFR_RNDN);

    // bound = (u*lead + factor*u*abs_terms + N*u_acc*(lead + abs_terms)) / N + u*|q|
    MpfrReal bound(bound_prec), tmp(bound_prec);
    mpfr_mul_d(bound.get(), abs_terms.get(), term_error_factor(p.n), MPFR_RNDU);
    mpfr_add(bound.get(), bound.get(), lead.get(), MPFR_RNDU);
    mpfr_div_2si(bound.get(), bound.get(), prec, MPFR_RNDU);
    mpfr_add(tmp.get(), lead.get(), abs_terms.get(), MPFR_RNDU);
    mpfr_mul_ui(tmp.get(), tmp.get(), dim, MPFR_RNDU);
    mpfr_div_2si(tmp.get(), tmp.get(), acc_prec, MPFR_RNDU);
    mpfr_add(bound.get(), bound.get(), tmp.get(), MPFR_RNDU);
    mpfr_div_ui(bound.get(), bound.get(), dim, MPFR_RNDU);
    mpfr_abs(tmp.get(), acc.get(), MPFR_RNDU);
    mpfr_div_2si(tmp.get(), tmp.get(), prec, MPFR_RNDU);
    mpfr_add(bound.get(), bound.get(), tmp.get(), MPFR_RNDU);

    SpectralAttempt a;
    mpfr_get_z(a.value.backend().data(), rounded.get(), MPFR_RNDN);
    a.distance = diff.to_double();
    a.error_bound = mpfr_get_d(bound.get(), MPFR_RNDU);
    return a;
}

}  // namespace detail

/// Evaluates the spectral sum for the entry at circulant offset l - kn with one fixed strategy.
inline SpectralAttempt spectral_attempt(Params const& p, std::int64_t l, Strategy strategy,
                                        std::uint32_t mantissa_bits = 0) {
    detail::check_index(p, l);
    auto const offset = l - p.centre();
    switch (strategy) {
        case Strategy::plain_double: return detail::attempt_double(p, offset, false);
        case Strategy::compensated_double: return detail::attempt_double(p, offset, true);
        case Strategy::arbitrary:
            return detail::attempt_mpfr(p, offset, std::max(mantissa_bits, required_bits(p)));
    }
    throw std::invalid_argument("unknown strategy");
}

/// p_l^(n) from the real cosine form of the spectral decomposition, certified.
inline CertifiedInteger coefficient_via_spectrum(Params const& p, std::int64_t l,
                                                 PrecisionPolicy const& policy = {}) {
    policy.validate();
    detail::check_index(p, l);
    int escalations = 0;
    auto const budget = required_bits(p);
    auto strategy = policy.strategy;
    for (;;) {
        PrecisionPolicy used = policy;
        used.strategy = strategy;
        if (strategy == Strategy::arbitrary) used.mantissa_bits = std::max(policy.mantissa_bits, budget);
        // doubles are never trusted beyond their budget, whatever the residual says
        if (strategy == Strategy::arbitrary || budget <= double_budget_bits) {
            auto attempt = spectral_attempt(p, l, strategy, used.mantissa_bits);
            double const residual = attempt.residual();
            if (residual < policy.residual_cap) {
                return CertifiedInteger{std::move(attempt.value), residual, used, escalations};
            }
            if (strategy == Strategy::arbitrary) {
                throw certification_failure(
                    "spectral sum for k=" + std::to_string(p.k) + " n=" + std::to_string(p.n) +
                        " l=" + std::to_string(l) + " not certified at " +
                        std::to_string(used.mantissa_bits) + " bits: residual " + std::to_string(residual),
                    residual);
            }
        }
        strategy = strategy == Strategy::plain_double ? Strategy::compensated_double : Strategy::arbitrary;
        ++escalations;
    }
}

/// M^(2k,n) = (1/N) [ (2k+1)^n + sum_l (sin((2k+1) l pi/N) / sin(l pi/N))^n ], certified.
inline CertifiedInteger central_via_spectrum(Params const& p, PrecisionPolicy const& policy = {}) {
    return coefficient_via_spectrum(p, p.centre(), policy);
}

}  // namespace multinom
