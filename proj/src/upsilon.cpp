#include "psum/upsilon.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace psum {

real upsilon(std::uint64_t n, const FactorSieve& sieve) {
    if (n == 0) throw domain_error("upsilon(0) is undefined");
    if (n > sieve.limit()) throw range_error("upsilon query " + std::to_string(n) + " exceeds factor sieve limit");
    if (n < 4) return 0;
    const std::uint64_t p = sieve.spf(n);
    const std::uint64_t q = n / p;
    if (q == 1 || !sieve.is_prime(q)) return 0;
    return p == q ? std::log(static_cast<real>(p)) : std::log(static_cast<real>(n));
}

real UpsilonSums::max_relative_spread() const noexcept {
    const real hi = std::max({sum_direct, sum_lemma, sum_logsemiprime});
    const real lo = std::min({sum_direct, sum_lemma, sum_logsemiprime});
    if (hi == 0) return 0;
    return (hi - lo) / hi;
}

UpsilonSums upsilon_sums(std::uint64_t x, const PrimeTable& table, const FactorSieve& sieve) {
    if (x < 1) throw domain_error("x must be positive");
    if (x > sieve.limit() || x / 2 > table.limit()) {
        throw range_error("upsilon sums at x = " + std::to_string(x) + " exceed table limits");
    }
    UpsilonSums out;
    out.x = x;

    CompensatedSum direct;
    CompensatedSum semiprime_logs;
    for (std::uint64_t n = 2; n <= x; ++n) {
        const real u = upsilon(n, sieve);
        if (u != 0) direct.add(u);
        if (omega(n, sieve) == 2) semiprime_logs.add_log(n);
    }
    out.sum_direct = direct.value();
    out.sum_logsemiprime = semiprime_logs.value() - table.theta(isqrt(x));

    CompensatedSum lemma;
    const auto primes = table.primes();
    for (std::size_t i = 0; i < primes.size() && primes[i] <= x / 2; ++i) {
        const std::uint64_t p = primes[i];
        lemma.add(static_cast<real>(table.pi(x / p)) * std::log(static_cast<real>(p)));
    }
    out.sum_lemma = lemma.value();
    return out;
}

real mertens_sum(std::uint64_t x, const PrimeTable& table) {
    if (x < 2) throw domain_error("mertens sum requires x >= 2");
    if (x / 2 > table.limit()) throw range_error("mertens sum at x = " + std::to_string(x) + " exceeds table");
    const real log_x = std::log(static_cast<real>(x));
    CompensatedSum acc;
    for (const std::uint64_t p : table.primes()) {
        if (p > x / 2) break;
        const real log_p = std::log(static_cast<real>(p));
        acc.add(log_p / static_cast<real>(p) / (1 - log_p / log_x));
    }
    return acc.value();
}

UpsilonSummary summarize(std::uint64_t x, const PrimeTable& table, const FactorSieve& sieve) {
    if (x < 16) throw domain_error("upsilon summary requires x >= 16 (log log x must be positive)");
    const UpsilonSums sums = upsilon_sums(x, table, sieve);
    UpsilonSummary out;
    out.x = x;
    out.sum_direct = sums.sum_direct;
    out.sum_lemma = sums.sum_lemma;
    out.sum_logsemiprime = sums.sum_logsemiprime;
    out.mertens_sum = mertens_sum(x, table);
    const real log_x = std::log(static_cast<real>(x));
    out.ratio = out.mertens_sum / (log_x * std::log(log_x));
    return out;
}

std::vector<TrendRow> trend_table(std::span<const std::uint64_t> xs, const PrimeTable& table) {
    std::vector<TrendRow> rows;
    rows.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const std::uint64_t x = xs[i];
        if (x < 16) throw domain_error("trend table requires x >= 16, got " + std::to_string(x));
        if (i > 0 && x <= xs[i - 1]) throw domain_error("trend table x values must be strictly increasing");
        TrendRow row;
        row.x = x;
        row.mertens_sum = mertens_sum(x, table);
        const real log_x = std::log(static_cast<real>(x));
        row.logx_loglogx = log_x * std::log(log_x);
        row.ratio = row.mertens_sum / row.logx_loglogx;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace psum
