#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include "psum/numeric.hpp"

namespace psum {

/// floor(log2(x/n)) split into its exact integer part and a residual in [0, 1).
struct DyadicLog {
    std::uint32_t int_part = 0;
    real frac_part = 0;
};

namespace detail {

// Largest b with n * 2^b <= x; requires 1 <= n <= x.
constexpr std::uint32_t dyadic_floor_unchecked(std::uint64_t x, std::uint64_t n) noexcept {
    std::uint32_t b = static_cast<std::uint32_t>(std::bit_width(x) - std::bit_width(n));
    if ((static_cast<unsigned __int128>(n) << b) > x) --b;
    return b;
}

constexpr void check_dyadic_args(std::uint64_t x, std::uint64_t n) {
    if (n == 0) throw domain_error("dyadic log: n must be positive");
    if (n > x) {
        throw domain_error("dyadic log: n = " + std::to_string(n) + " exceeds x = " + std::to_string(x));
    }
}

}  // namespace detail

/// Largest b >= 0 with n * 2^b <= x, by integer shift-and-compare only.
constexpr std::uint32_t dyadic_floor(std::uint64_t x, std::uint64_t n) {
    detail::check_dyadic_args(x, n);
    return detail::dyadic_floor_unchecked(x, n);
}

/// True iff x/n is an exact power of two (n | x and the quotient has one bit set).
constexpr bool is_dyadic_ratio(std::uint64_t x, std::uint64_t n) {
    detail::check_dyadic_args(x, n);
    return x % n == 0 && std::has_single_bit(x / n);
}

/// log2(x/n) - dyadic_floor(x, n). Only the residual log2(1 + d/m), with
/// m = n*2^b and d = x - m exact integers, is evaluated in floating point.
inline real dyadic_frac(std::uint64_t x, std::uint64_t n) {
    detail::check_dyadic_args(x, n);
    const std::uint32_t b = detail::dyadic_floor_unchecked(x, n);
    const unsigned __int128 m = static_cast<unsigned __int128>(n) << b;
    const unsigned __int128 d = x - m;
    if (d == 0) return 0;
    const real f = std::log1p(static_cast<real>(d) / static_cast<real>(m)) / kLn2;
    // d < m, so the true value is < 1; a rounded 1.0 is pulled back into range.
    return f < 1 ? f : std::nextafter(real{1}, real{0});
}

inline DyadicLog dyadic_log(std::uint64_t x, std::uint64_t n) {
    return {dyadic_floor(x, n), dyadic_frac(x, n)};
}

}  // namespace psum
