#include "psum/prime_engine.hpp"

#include <algorithm>
#include <bit>
#include <thread>

namespace psum {

namespace {

// Odd primes <= limit by a plain sieve; used only for the base primes <= sqrt(limit).
std::vector<std::uint64_t> base_odd_primes(std::uint64_t limit) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 3; i <= limit; i += 2) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += 2 * i) composite[j] = true;
    }
    return out;
}

// Sieves odd indices [lo, hi) (index i <-> 2i+1) segment by segment and appends primes.
void sieve_index_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment_bits,
                       std::span<const std::uint64_t> base, std::vector<std::uint64_t>& out) {
    std::vector<std::uint64_t> words((segment_bits + 63) / 64);
    for (std::uint64_t seg_lo = lo; seg_lo < hi; seg_lo += segment_bits) {
        const std::uint64_t seg_hi = std::min(hi, seg_lo + segment_bits);
        const std::uint64_t nbits = seg_hi - seg_lo;
        std::fill(words.begin(), words.end(), ~std::uint64_t{0});

        const std::uint64_t first_value = 2 * seg_lo + 1;
        const std::uint64_t last_value = 2 * (seg_hi - 1) + 1;
        for (const std::uint64_t p : base) {
            const std::uint64_t square = p * p;
            if (square > last_value) break;
            std::uint64_t m = (first_value + p - 1) / p * p;
            if ((m & 1) == 0) m += p;
            m = std::max(m, square);
            for (std::uint64_t idx = (m - 1) / 2 - seg_lo; idx < nbits; idx += p) {
                words[idx >> 6] &= ~(std::uint64_t{1} << (idx & 63));
            }
        }
        if (seg_lo == 0) words[0] &= ~std::uint64_t{1};  // 1 is not prime

        for (std::uint64_t w = 0; w * 64 < nbits; ++w) {
            std::uint64_t bits = words[w];
            if ((w + 1) * 64 > nbits) bits &= (std::uint64_t{1} << (nbits - w * 64)) - 1;
            while (bits) {
                const std::uint64_t idx = seg_lo + w * 64 + static_cast<std::uint64_t>(std::countr_zero(bits));
                out.push_back(2 * idx + 1);
                bits &= bits - 1;
            }
        }
    }
}

}  // namespace

PrimeTable::PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes)
    : limit_(limit), primes_(std::move(primes)) {
    theta_prefix_.reserve(primes_.size());
    theta_error_.reserve(primes_.size());
    CompensatedSum acc;
    for (const std::uint64_t p : primes_) {
        acc.add_log(p);
        theta_prefix_.push_back(acc.value());
        theta_error_.push_back(acc.error_bound());
    }
    odd_bits_.assign(limit_ / 128 + 1, 0);
    for (const std::uint64_t p : primes_) {
        if (p == 2) continue;
        const std::uint64_t i = p / 2;
        odd_bits_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
}

void PrimeTable::check(std::uint64_t y) const {
    if (y > limit_) {
        throw range_error("query " + std::to_string(y) + " exceeds prime table limit " + std::to_string(limit_));
    }
}

std::uint64_t PrimeTable::pi(std::uint64_t y) const {
    check(y);
    return static_cast<std::uint64_t>(std::upper_bound(primes_.begin(), primes_.end(), y) - primes_.begin());
}

real PrimeTable::theta(std::uint64_t y) const { return theta_tracked(y).value; }

TrackedReal PrimeTable::theta_tracked(std::uint64_t y) const {
    const std::uint64_t k = pi(y);
    if (k == 0) return {};
    return {theta_prefix_[k - 1], theta_error_[k - 1]};
}

bool PrimeTable::is_prime(std::uint64_t y) const {
    check(y);
    if (y < 3) return y == 2;
    if ((y & 1) == 0) return false;
    const std::uint64_t i = y / 2;
    return (odd_bits_[i >> 6] >> (i & 63)) & 1;
}

std::uint64_t PrimeTable::nth_prime(std::uint64_t n) const {
    if (n == 0) throw domain_error("prime index is 1-based");
    if (n > primes_.size()) {
        throw range_error("prime #" + std::to_string(n) + " lies beyond table limit " + std::to_string(limit_));
    }
    return primes_[n - 1];
}

std::uint64_t PrimeTable::estimate_bytes(std::uint64_t limit) noexcept {
    // pi(x) < 1.26 x / ln x for x > 1; each prime stores the value, theta and its error bound.
    const double x = static_cast<double>(std::max<std::uint64_t>(limit, 17));
    const double count = 1.26 * x / std::log(x);
    return static_cast<std::uint64_t>(count * (8 + 2 * sizeof(real))) + limit / 16 + 64;
}

PrimeTable build_prime_table(std::uint64_t limit, const SieveOptions& options) {
    if (limit < 2) throw domain_error("prime table limit must be >= 2");
    const std::uint64_t need = PrimeTable::estimate_bytes(limit);
    if (need > options.memory_budget) {
        throw resource_error("prime table up to " + std::to_string(limit) + " exceeds memory budget", need);
    }

    const auto base = base_odd_primes(isqrt(limit));
    const std::uint64_t segment_bits = std::max<std::uint64_t>(64, options.segment_bytes * 8);
    const std::uint64_t index_end = (limit - 1) / 2 + 1;  // odd values 1..limit
    const std::uint64_t segments = (index_end + segment_bits - 1) / segment_bits;
    const unsigned threads = static_cast<unsigned>(
        std::clamp<std::uint64_t>(options.threads, 1, std::max<std::uint64_t>(segments, 1)));

    std::vector<std::vector<std::uint64_t>> parts(threads);
    const std::uint64_t per_thread = (segments + threads - 1) / threads;
    auto work = [&](unsigned t) {
        const std::uint64_t lo = std::min(index_end, t * per_thread * segment_bits);
        const std::uint64_t hi = std::min(index_end, (t + 1) * per_thread * segment_bits);
        sieve_index_range(lo, hi, segment_bits, base, parts[t]);
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }

    std::size_t total = 1;
    for (const auto& part : parts) total += part.size();
    std::vector<std::uint64_t> primes;
    primes.reserve(total);
    primes.push_back(2);
    for (const auto& part : parts) primes.insert(primes.end(), part.begin(), part.end());
    return PrimeTable(limit, std::move(primes));
}

FactorSieve::FactorSieve(std::uint64_t limit, std::uint64_t memory_budget) : limit_(limit) {
    if (limit < 1) throw domain_error("factor sieve limit must be >= 1");
    if (limit > std::numeric_limits<std::uint32_t>::max() || estimate_bytes(limit) > memory_budget) {
        throw resource_error("factor sieve up to " + std::to_string(limit) + " exceeds memory budget",
                             estimate_bytes(limit));
    }
    // Linear sieve: every composite is written once, by its smallest prime factor.
    spf_.assign(limit + 1, 0);
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = static_cast<std::uint32_t>(i);
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (const std::uint32_t p : primes) {
            if (p > spf_[i] || i * p > limit) break;
            spf_[i * p] = p;
        }
    }
}

std::uint64_t FactorSieve::spf(std::uint64_t n) const {
    if (n > limit_) {
        throw range_error("query " + std::to_string(n) + " exceeds factor sieve limit " + std::to_string(limit_));
    }
    if (n < 2) throw domain_error("smallest prime factor is undefined below 2");
    return spf_[n];
}

std::vector<std::uint64_t> FactorSieve::factorize(std::uint64_t n) const {
    if (n > limit_) {
        throw range_error("query " + std::to_string(n) + " exceeds factor sieve limit " + std::to_string(limit_));
    }
    if (n == 0) throw domain_error("cannot factor 0");
    std::vector<std::uint64_t> out;
    while (n > 1) {
        const std::uint64_t p = spf_[n];
        out.push_back(p);
        n /= p;
    }
    return out;
}

FactorSieve build_factor_sieve(std::uint64_t limit, std::uint64_t memory_budget) {
    return FactorSieve(limit, memory_budget);
}

unsigned omega(std::uint64_t n, const FactorSieve& sieve) {
    if (n == 0) throw domain_error("omega(0) is undefined");
    if (n > sieve.limit()) {
        throw range_error("omega query " + std::to_string(n) + " exceeds factor sieve limit");
    }
    unsigned count = 0;
    while (n > 1) {
        n /= sieve.spf(n);
        ++count;
    }
    return count;
}

real theta(std::uint64_t y, const PrimeTable& table) { return table.theta(y); }

std::uint64_t enumerate_odd_semiprime_products(std::uint64_t x, const PrimeTable& table) {
    if (x < 5) throw domain_error("semiprime count requires x >= 5");
    const std::uint64_t m = table.pi(x) - 1;  // odd primes <= x
    // #S_j = m - j + 1 for j = 1..m
    std::uint64_t total = 0;
    for (std::uint64_t j = 1; j <= m; ++j) total += m - j + 1;
    return total;
}

}  // namespace psum
