#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace psum {

/// Working real type for every accumulated quantity (64-bit mantissa on x86-64).
using real = long double;

inline constexpr real kLn2 = 0.693147180559945309417232121458176568L;

class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class range_error : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class resource_error : public std::runtime_error {
public:
    resource_error(const std::string& what, std::uint64_t required_bytes)
        : std::runtime_error(what + " (requires ~" + std::to_string(required_bytes) + " bytes)"),
          required_bytes_(required_bytes) {}

    std::uint64_t required_bytes() const noexcept { return required_bytes_; }

private:
    std::uint64_t required_bytes_;
};

/// Raised when a rounding decision cannot be made safely at the available precision.
class inconclusive_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value together with a rigorous-in-practice bound on its absolute error.
struct TrackedReal {
    real value = 0;
    real error_bound = 0;
};

/// Neumaier compensated summation with a running absolute-error bound.
///
/// The bound is eps*|S| + n*eps^2*sum|x_i| for the summation itself, plus the
/// caller-declared per-term evaluation errors.
class CompensatedSum {
public:
    void add(real x, real term_error = 0) noexcept {
        const real t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
        abs_sum_ += std::fabs(x);
        term_error_ += term_error;
        ++count_;
    }

    /// Adds log(k) with a 2-ulp evaluation error allowance.
    void add_log(std::uint64_t k) noexcept {
        const real l = std::log(static_cast<real>(k));
        add(l, 2 * kEps * std::fabs(l));
    }

    real value() const noexcept { return sum_ + comp_; }

    real error_bound() const noexcept {
        const real n = static_cast<real>(count_);
        return kEps * std::fabs(value()) + n * kEps * kEps * abs_sum_ + term_error_;
    }

    TrackedReal tracked() const noexcept { return {value(), error_bound()}; }

    std::size_t count() const noexcept { return count_; }

    static constexpr real kEps = std::numeric_limits<real>::epsilon();

private:
    real sum_ = 0;
    real comp_ = 0;
    real abs_sum_ = 0;
    real term_error_ = 0;
    std::size_t count_ = 0;
};

/// Largest s with s*s <= n.
inline std::uint64_t isqrt(std::uint64_t n) noexcept {
    if (n < 2) return n;
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (static_cast<unsigned __int128>(r) * r > n) --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace psum
