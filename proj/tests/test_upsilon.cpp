#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "psum/upsilon.hpp"

using namespace psum;

namespace {

const PrimeTable& table() {
    static const PrimeTable t = build_prime_table(1000000);
    return t;
}

const FactorSieve& sieve() {
    static const FactorSieve s = build_factor_sieve(1000000);
    return s;
}

real rel(real a, real b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

}  // namespace

TEST_CASE("first ten values") {
    const real l2 = std::log(2.0L), l3 = std::log(3.0L);
    const real expected[] = {0, 0, 0, l2, 0, std::log(6.0L), 0, 0, l3, std::log(10.0L)};
    for (std::uint64_t n = 1; n <= 10; ++n) {
        CHECK(upsilon(n, sieve()) == doctest::Approx(static_cast<double>(expected[n - 1])).epsilon(1e-15));
    }
    CHECK(upsilon(8, sieve()) == 0);
    CHECK_THROWS_AS(upsilon(1000001, sieve()), range_error);
}

TEST_CASE("support is exactly Omega(n) = 2") {
    for (std::uint64_t n = 1; n <= 100000; ++n) {
        const real u = upsilon(n, sieve());
        const unsigned om = oracle::big_omega(n);
        REQUIRE((u != 0) == (om == 2));
        if (om != 2) continue;
        const std::uint64_t p = sieve().spf(n);
        if (p * p == n) {
            REQUIRE(std::fabs(u - std::log(static_cast<real>(n)) / 2) < 1e-15L);
        } else {
            REQUIRE(u == std::log(static_cast<real>(n)));
        }
    }
}

TEST_CASE("partial-sum anchors at x = 10 and x = 20") {
    const real l2 = std::log(2.0L), l3 = std::log(3.0L), l5 = std::log(5.0L), l7 = std::log(7.0L);
    const auto s10 = upsilon_sums(10, table(), sieve());
    const real e10 = 3 * l2 + 2 * l3 + l5;
    CHECK(rel(s10.sum_direct, e10) < 1e-12L);
    CHECK(rel(s10.sum_lemma, e10) < 1e-12L);
    CHECK(rel(s10.sum_logsemiprime, e10) < 1e-12L);
    // pi(5) log 2 + pi(3) log 3 + pi(2) log 5
    CHECK(rel(s10.sum_lemma, 3 * l2 + 2 * l3 + 1 * l5) < 1e-12L);

    const auto s20 = upsilon_sums(20, table(), sieve());
    const real e20 = 4 * l2 + 3 * l3 + 2 * l5 + l7;
    CHECK(rel(s20.sum_direct, e20) < 1e-12L);
    CHECK(rel(s20.sum_lemma, e20) < 1e-12L);
    CHECK(rel(s20.sum_logsemiprime, e20) < 1e-12L);
}

TEST_CASE("three routes agree at powers of ten") {
    for (const std::uint64_t x : {100, 1000, 10000, 100000, 1000000}) {
        const auto s = summarize(x, table(), sieve());
        CHECK(rel(s.sum_direct, s.sum_lemma) < 1e-9L);
        CHECK(rel(s.sum_direct, s.sum_logsemiprime) < 1e-9L);
        CHECK(rel(s.sum_lemma, s.sum_logsemiprime) < 1e-9L);
        CHECK(s.sum_direct > 0);
        CHECK(std::isfinite(s.ratio));
        CHECK(s.ratio > 0);
    }
}

TEST_CASE("pairs-and-squares bijection by brute force")  {
    // Each p < q with pq <= x contributes log p + log q, each p^2 <= x contributes log p.
    for (const std::uint64_t x : {37, 500, 4096}) {
        const auto primes = oracle::primes_by_trial_division(x);
        oracle::hp s = 0;
        for (std::size_t i = 0; i < primes.size(); ++i) {
            for (std::size_t j = i; j < primes.size() && primes[i] * primes[j] <= x; ++j) {
                s += i == j ? log(oracle::hp(primes[i])) : log(oracle::hp(primes[i] * primes[j]));
            }
        }
        const auto got = upsilon_sums(x, table(), sieve());
        CHECK(std::fabs(static_cast<double>((oracle::hp(static_cast<double>(got.sum_direct)) - s) / s)) < 1e-12);
    }
}

TEST_CASE("theta(isqrt x) is the gap between semiprime logs and the direct sum") {
    for (const std::uint64_t x : {16, 99, 100, 101, 10000, 999999, 1000000}) {
        real logs = 0;
        CompensatedSum acc;
        for (std::uint64_t n = 4; n <= x; ++n) {
            if (oracle::big_omega(n) == 2) acc.add_log(n);
        }
        logs = acc.value();
        const auto s = upsilon_sums(x, table(), sieve());
        const real th = table().theta(isqrt(x));
        CHECK(rel(logs - s.sum_direct, th) < 1e-9L);
    }
}

TEST_CASE("summary and trend contracts") {
    CHECK_THROWS_AS(summarize(15, table(), sieve()), domain_error);
    CHECK_THROWS_AS(summarize(2000000, table(), sieve()), range_error);

    CHECK(trend_table({}, table()).empty());
    const std::uint64_t one[] = {10000};
    const auto rows = trend_table(one, table());
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].ratio > 0);

    const std::uint64_t three[] = {10000, 100000, 1000000};
    const auto t3 = trend_table(three, table());
    REQUIRE(t3.size() == 3);
    for (const auto& r : t3) {
        CHECK(r.ratio == doctest::Approx(static_cast<double>(summarize(r.x, table(), sieve()).ratio)));
        CHECK(r.logx_loglogx == doctest::Approx(std::log(double(r.x)) * std::log(std::log(double(r.x)))));
    }
    const std::uint64_t unordered[] = {100000, 10000};
    CHECK_THROWS_AS(trend_table(unordered, table()), domain_error);
    const std::uint64_t small[] = {10};
    CHECK_THROWS_AS(trend_table(small, table()), domain_error);
}

TEST_CASE("mertens sum by naive double summation") {
    for (const std::uint64_t x : {100, 5000}) {
        double s = 0;
        const double lx = std::log(double(x));
        for (std::uint64_t p = 2; p <= x / 2; ++p) {
            if (!oracle::is_prime(p)) continue;
            const double lp = std::log(double(p));
            s += lp / double(p) / (1 - lp / lx);
        }
        CHECK(static_cast<double>(mertens_sum(x, table())) == doctest::Approx(s).epsilon(1e-12));
    }
}
