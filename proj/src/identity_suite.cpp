#include "psum/identity_suite.hpp"

#include <cmath>

#include "psum/exact_dyadic.hpp"

namespace psum {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t to_i64(std::uint64_t v) { return static_cast<std::int64_t>(v); }

void finish_exact(VerificationReport& r, std::int64_t lhs, std::int64_t rhs, Clock::time_point start) {
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = static_cast<real>(lhs - rhs);
    r.exact = lhs == rhs;
    r.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
}

}  // namespace

bool VerificationReport::passed() const noexcept {
    if (identity != IdentityId::cor_pi) return exact;
    return !inconclusive && std::fabs(residual) < real{0.5};
}

VerificationReport verify_theorem1(std::uint64_t x, const PrimeTable& table) {
    if (x < 5) throw domain_error("theorem 1 requires x >= 5, got x = " + std::to_string(x));
    const auto start = Clock::now();
    VerificationReport r;
    r.identity = IdentityId::thm1;
    r.x = x;
    const std::uint64_t lhs = enumerate_odd_semiprime_products(x, table);
    const std::uint64_t pi = table.pi(x);
    finish_exact(r, to_i64(lhs), to_i64(pi * (pi - 1) / 2), start);
    return r;
}

std::int64_t odd_dyadic_floor_sum(std::uint64_t x) {
    if (x < 1) throw domain_error("x must be positive");
    std::uint64_t sum = 0;
    for (std::uint64_t n = 1; n <= x; n += 2) sum += detail::dyadic_floor_unchecked(x, n);
    return to_i64(sum);
}

VerificationReport verify_theorem2(std::uint64_t x) {
    if (x < 1) throw domain_error("theorem 2 requires x >= 1");
    const auto start = Clock::now();
    VerificationReport r;
    r.identity = IdentityId::thm2;
    r.x = x;
    finish_exact(r, odd_dyadic_floor_sum(x), to_i64(x / 2), start);
    return r;
}

TrackedReal compute_H(std::uint64_t x, const PrimeTable& table) {
    if (x < 2) throw domain_error("H(x) requires x >= 2");
    const std::uint64_t count = table.pi(x);
    CompensatedSum acc;
    const auto primes = table.primes();
    for (std::uint64_t i = 0; i < count; ++i) {
        const real f = dyadic_frac(x, primes[i]);
        acc.add(f, 4 * CompensatedSum::kEps * f);
    }
    return acc.tracked();
}

std::int64_t compute_G(std::uint64_t x, const PrimeTable& table, const FactorSieve& sieve) {
    if (x < 2) throw domain_error("G(x) requires x >= 2");
    if (x > table.limit() || x > sieve.limit()) {
        throw range_error("G(" + std::to_string(x) + ") exceeds table limits");
    }
    std::uint64_t sum = dyadic_floor(x, 1);
    for (std::uint64_t n = 9; n <= x; n += 2) {
        if (omega(n, sieve) >= 2) sum += detail::dyadic_floor_unchecked(x, n);
    }
    return to_i64(sum);
}

std::int64_t compute_T(std::uint64_t x) {
    if (x < 2) throw domain_error("T(x) requires x >= 2");
    return dyadic_floor(x, 2);
}

PiReconstruction reconstruct_pi(std::uint64_t x, const PrimeTable& table, const FactorSieve& sieve,
                                ParityVariant variant) {
    if (x < 2) throw domain_error("pi(x) formula divides by log x; requires x >= 2");
    const TrackedReal h = compute_H(x, table);
    const TrackedReal th = table.theta_tracked(x);
    const std::int64_t g = compute_G(x, table, sieve);
    const std::int64_t t = compute_T(x);
    const real parity = (x % 2 == 0) ? 2 : 0;  // 1 + (-1)^x
    const real parity_term = variant == ParityVariant::statement ? parity * kLn2 / 4 : parity / 4;

    const real integer_part = static_cast<real>(x - 1) * kLn2 / 2 + kLn2 * static_cast<real>(t - g);
    const real numerator = integer_part + th.value + kLn2 * h.value + parity_term;
    const real log_x = std::log(static_cast<real>(x));

    constexpr real eps = CompensatedSum::kEps;
    // Each product/sum below rounds once; 8 eps per operand magnitude covers them.
    const real numerator_error =
        th.error_bound + kLn2 * h.error_bound +
        8 * eps * (std::fabs(integer_part) + th.value + kLn2 * h.value + std::fabs(parity_term));
    const real value = numerator / log_x;
    const real error_bound = numerator_error / log_x + 4 * eps * std::fabs(value);

    PiReconstruction out;
    out.value = value;
    out.error_bound = error_bound;
    out.variant = variant;
    if (error_bound <= real{0.25}) out.rounded = std::llround(value);
    return out;
}

VerificationReport verify_pi_formula(std::uint64_t x, const PrimeTable& table, const FactorSieve& sieve,
                                     ParityVariant variant) {
    const auto start = Clock::now();
    const PiReconstruction rec = reconstruct_pi(x, table, sieve, variant);
    VerificationReport r;
    r.identity = IdentityId::cor_pi;
    r.x = x;
    const std::int64_t pi = to_i64(table.pi(x));
    r.lhs = rec.value;
    r.rhs = pi;
    r.residual = rec.value - static_cast<real>(pi);
    r.exact = false;
    r.inconclusive = !rec.rounded.has_value();
    r.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
    return r;
}

void VariantAudit::add(const PiReconstruction& r, std::uint64_t pi_x) {
    ++checked;
    const real residual = std::fabs(r.value - static_cast<real>(pi_x));
    if (residual < real{0.5}) ++within_half;
    if (r.rounded && *r.rounded == static_cast<std::int64_t>(pi_x)) ++rounds_to_pi;
    max_abs_residual = std::max(max_abs_residual, residual);
}

}  // namespace psum
