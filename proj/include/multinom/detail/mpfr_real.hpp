#pragma once

// Minimal owning wrapper around mpfr_t. Each value carries its own precision,
// so no global or thread-local default precision is ever touched.

#include <mpfr.h>

#include <utility>

namespace multinom::detail {

class MpfrReal {
public:
    explicit MpfrReal(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
    MpfrReal(mpfr_prec_t bits, long x) : MpfrReal(bits) { mpfr_set_si(v_, x, MPFR_RNDN); }

    MpfrReal(MpfrReal const& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    MpfrReal& operator=(MpfrReal const& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    MpfrReal(MpfrReal&& o) noexcept : MpfrReal(o.precision()) { mpfr_swap(v_, o.v_); }
    MpfrReal& operator=(MpfrReal&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~MpfrReal() { mpfr_clear(v_); }

    [[nodiscard]] mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    [[nodiscard]] double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    mpfr_ptr get() noexcept { return v_; }
    mpfr_srcptr get() const noexcept { return v_; }

private:
    mpfr_t v_;
};

}  // namespace multinom::detail
