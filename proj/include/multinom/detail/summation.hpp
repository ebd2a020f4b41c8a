#pragma once

#include <cmath>
#include <span>

namespace multinom::detail {

/// Neumaier's variant of Kahan summation; also handles terms larger than the running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        double const t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

inline double compensated_sum(std::span<double const> xs) noexcept {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

}  // namespace multinom::detail
