#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "psum/numeric.hpp"

namespace psum {

struct SieveOptions {
    /// Bytes of bit storage per segment; each byte covers 16 integers.
    std::size_t segment_bytes = 32 * 1024;
    unsigned threads = 1;
    /// Hard ceiling on the table footprint; exceeding it raises resource_error.
    std::uint64_t memory_budget = std::uint64_t{8} << 30;
};

/// Immutable table of all primes up to a limit with prefix counts and log-sums.
class PrimeTable {
public:
    PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes);

    std::uint64_t limit() const noexcept { return limit_; }
    std::span<const std::uint64_t> primes() const noexcept { return primes_; }
    std::size_t size() const noexcept { return primes_.size(); }

    /// Number of primes <= y.
    std::uint64_t pi(std::uint64_t y) const;
    /// Sum of log p over primes p <= y.
    real theta(std::uint64_t y) const;
    TrackedReal theta_tracked(std::uint64_t y) const;
    bool is_prime(std::uint64_t y) const;
    /// 1-based: nth_prime(1) == 2.
    std::uint64_t nth_prime(std::uint64_t n) const;

    /// Upper estimate of the heap footprint of a table with the given limit.
    static std::uint64_t estimate_bytes(std::uint64_t limit) noexcept;

private:
    void check(std::uint64_t y) const;

    std::uint64_t limit_;
    std::vector<std::uint64_t> primes_;
    std::vector<real> theta_prefix_;
    std::vector<real> theta_error_;
    std::vector<std::uint64_t> odd_bits_;  // bit i set <=> 2i+1 prime
};

/// Smallest-prime-factor table.
class FactorSieve {
public:
    explicit FactorSieve(std::uint64_t limit, std::uint64_t memory_budget = std::uint64_t{8} << 30);

    std::uint64_t limit() const noexcept { return limit_; }
    std::uint64_t spf(std::uint64_t n) const;
    bool is_prime(std::uint64_t n) const { return n >= 2 && spf(n) == n; }
    /// Prime factors with multiplicity, ascending. Empty for n = 1.
    std::vector<std::uint64_t> factorize(std::uint64_t n) const;

    static std::uint64_t estimate_bytes(std::uint64_t limit) noexcept { return 4 * (limit + 1); }

private:
    std::uint64_t limit_;
    std::vector<std::uint32_t> spf_;
};

/// Segmented, odd-only, bit-packed sieve of Eratosthenes. Output does not depend on
/// options.threads or options.segment_bytes.
PrimeTable build_prime_table(std::uint64_t limit, const SieveOptions& options = {});

FactorSieve build_factor_sieve(std::uint64_t limit, std::uint64_t memory_budget = std::uint64_t{8} << 30);

/// Prime factors of n counted with multiplicity; omega(1) == 0.
unsigned omega(std::uint64_t n, const FactorSieve& sieve);

real theta(std::uint64_t y, const PrimeTable& table);

/// Size of { p*q : p <= q odd primes <= x }, counted row by row as in the sets
/// S_j = { p_j p_j, ..., p_j p_m }.
std::uint64_t enumerate_odd_semiprime_products(std::uint64_t x, const PrimeTable& table);

/// Writes the PSUM1 cache format.
void save_prime_table(const PrimeTable& table, const std::filesystem::path& path);
/// Reads a PSUM1 cache file; throws std::runtime_error on malformed or corrupted input.
PrimeTable load_prime_table(const std::filesystem::path& path);

}  // namespace psum
