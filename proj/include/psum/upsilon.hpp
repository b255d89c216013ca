#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "psum/numeric.hpp"
#include "psum/prime_engine.hpp"

namespace psum {

/// log p for n = p^2, log n for n = p*q with p != q, 0 otherwise.
real upsilon(std::uint64_t n, const FactorSieve& sieve);

/// The three routes to sum_{n<=x} upsilon(n).
struct UpsilonSums {
    std::uint64_t x = 0;
    real sum_direct = 0;        // by definition, ascending n
    real sum_lemma = 0;         // sum_{p <= x/2} pi(x/p) log p
    real sum_logsemiprime = 0;  // sum_{Omega(n)=2} log n - theta(isqrt x)

    /// Largest pairwise relative difference of the three sums.
    real max_relative_spread() const noexcept;
};

struct UpsilonSummary {
    std::uint64_t x = 0;
    real sum_direct = 0;
    real sum_lemma = 0;
    real sum_logsemiprime = 0;
    real mertens_sum = 0;
    /// mertens_sum / (log x * log log x)
    real ratio = 0;
};

/// Valid for any x >= 1 within table and sieve limits.
UpsilonSums upsilon_sums(std::uint64_t x, const PrimeTable& table, const FactorSieve& sieve);

/// sum_{p <= x/2} (log p / p) (1 - log p / log x)^{-1}; requires x >= 2.
real mertens_sum(std::uint64_t x, const PrimeTable& table);

/// Requires x >= 16 so that log log x > 0.
UpsilonSummary summarize(std::uint64_t x, const PrimeTable& table, const FactorSieve& sieve);

struct TrendRow {
    std::uint64_t x = 0;
    real mertens_sum = 0;
    real logx_loglogx = 0;
    real ratio = 0;
};

/// One row per x; xs must be strictly increasing with every x >= 16.
std::vector<TrendRow> trend_table(std::span<const std::uint64_t> xs, const PrimeTable& table);

}  // namespace psum
