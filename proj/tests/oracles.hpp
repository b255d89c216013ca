#pragma once

// Test-only reference implementations. Nothing here calls into the library's
// sieve, dyadic or summation code.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

using hp = boost::multiprecision::cpp_bin_float_100;

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

inline std::vector<std::uint64_t> primes_by_trial_division(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        if (is_prime(n)) out.push_back(n);
    }
    return out;
}

/// Plain byte-per-number Eratosthenes, for recounts above the trial-division range.
inline std::vector<std::uint64_t> primes_by_simple_sieve(std::uint64_t limit) {
    std::vector<char> composite(limit + 1, 0);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    return out;
}

inline unsigned big_omega(std::uint64_t n) {
    unsigned count = 0;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        while (n % d == 0) {
            n /= d;
            ++count;
        }
    }
    return count + (n > 1 ? 1 : 0);
}

/// floor(log2(x/n)) by repeated doubling.
inline unsigned dyadic_floor(std::uint64_t x, std::uint64_t n) {
    unsigned b = 0;
    unsigned __int128 v = n;
    while (v * 2 <= x) {
        v *= 2;
        ++b;
    }
    return b;
}

inline hp log2_ratio(std::uint64_t x, std::uint64_t n) {
    return log(hp(x) / hp(n)) / log(hp(2));
}

inline hp frac_log2_ratio(std::uint64_t x, std::uint64_t n) {
    const hp v = log2_ratio(x, n);
    return v - floor(v);
}

/// {p*q : p <= q odd primes <= x} materialized and deduplicated.
inline std::size_t odd_product_set_size(std::uint64_t x) {
    std::vector<std::uint64_t> odd;
    for (std::uint64_t p = 3; p <= x; p += 2) {
        if (is_prime(p)) odd.push_back(p);
    }
    std::set<std::uint64_t> products;
    for (std::size_t i = 0; i < odd.size(); ++i) {
        for (std::size_t j = i; j < odd.size(); ++j) products.insert(odd[i] * odd[j]);
    }
    return products.size();
}

inline double theta_naive(std::uint64_t y) {
    double s = 0;
    for (std::uint64_t p = 2; p <= y; ++p) {
        if (is_prime(p)) s += std::log(static_cast<double>(p));
    }
    return s;
}

/// Floor-log pieces of the pi(x) formula by brute force, and the formula in 100-digit arithmetic.
inline hp pi_formula(std::uint64_t x, bool statement_variant = true) {
    hp h = 0, theta = 0;
    for (std::uint64_t p = 2; p <= x; ++p) {
        if (!is_prime(p)) continue;
        h += frac_log2_ratio(x, p);
        theta += log(hp(p));
    }
    std::int64_t g = dyadic_floor(x, 1);
    for (std::uint64_t n = 9; n <= x; n += 2) {
        if (big_omega(n) >= 2) g += dyadic_floor(x, n);
    }
    const std::int64_t t = dyadic_floor(x, 2);
    const hp ln2 = log(hp(2));
    const hp parity = (x % 2 == 0) ? 2 : 0;
    const hp parity_term = statement_variant ? parity * ln2 / 4 : parity / 4;
    return (hp(x - 1) * ln2 / 2 + theta + ln2 * (h - hp(g) + hp(t)) + parity_term) / log(hp(x));
}

inline hp log_factorial(std::uint64_t n) {
    hp s = 0;
    for (std::uint64_t k = 2; k <= n; ++k) s += log(hp(k));
    return s;
}

}  // namespace oracle
