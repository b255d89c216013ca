#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <variant>

#include "psum/numeric.hpp"
#include "psum/prime_engine.hpp"

namespace psum {

enum class IdentityId { thm1, thm2, cor_pi };

/// Either an exact integer or a real.
using Quantity = std::variant<std::int64_t, real>;

/// Outcome of checking one identity at one x.
struct VerificationReport {
    IdentityId identity = IdentityId::thm1;
    std::uint64_t x = 0;
    Quantity lhs{std::int64_t{0}};
    Quantity rhs{std::int64_t{0}};
    real residual = 0;
    /// Both sides exact integers and residual exactly 0.
    bool exact = false;
    /// COR_PI only: error bound too large to round safely.
    bool inconclusive = false;
    std::chrono::nanoseconds elapsed{0};

    bool passed() const noexcept;
};

/// Semiprime-set count against C(pi(x), 2). Requires 5 <= x <= table.limit().
VerificationReport verify_theorem1(std::uint64_t x, const PrimeTable& table);

/// Sum over odd n <= x of floor(log2(x/n)) against floor(x/2), which is
/// (x-1)/2 + (1+(-1)^x)/4 written as an integer.
VerificationReport verify_theorem2(std::uint64_t x);

/// Odd-n dyadic-floor sum alone; exposed for the partition check.
std::int64_t odd_dyadic_floor_sum(std::uint64_t x);

/// H(x): sum of fractional parts {log2(x/p)} over all primes p <= x.
TrackedReal compute_H(std::uint64_t x, const PrimeTable& table);

/// G(x): floor(log2 x) plus floor(log2(x/n)) over odd n <= x with Omega(n) >= 2.
std::int64_t compute_G(std::uint64_t x, const PrimeTable& table, const FactorSieve& sieve);

/// T(x) = floor(log2(x/2)).
std::int64_t compute_T(std::uint64_t x);

/// Which parity term to use in the pi(x) formula: (1+(-1)^x) log2 / 4 (statement)
/// or (1+(-1)^x) / 4 (proof's last display).
enum class ParityVariant { statement, proof };

struct PiReconstruction {
    real value = 0;
    real error_bound = 0;
    /// Nearest integer; empty when error_bound > 0.25.
    std::optional<std::int64_t> rounded;
    ParityVariant variant = ParityVariant::statement;
};

PiReconstruction reconstruct_pi(std::uint64_t x, const PrimeTable& table, const FactorSieve& sieve,
                                ParityVariant variant = ParityVariant::statement);

/// COR_PI report: lhs = formula value, rhs = sieve pi(x), residual = lhs - rhs.
VerificationReport verify_pi_formula(std::uint64_t x, const PrimeTable& table, const FactorSieve& sieve,
                                     ParityVariant variant = ParityVariant::statement);

/// Running tally of how one parity variant behaves over a range of x.
struct VariantAudit {
    ParityVariant variant = ParityVariant::statement;
    std::uint64_t checked = 0;
    std::uint64_t rounds_to_pi = 0;
    std::uint64_t within_half = 0;
    real max_abs_residual = 0;

    void add(const PiReconstruction& r, std::uint64_t pi_x);
    bool all_round() const noexcept { return checked == rounds_to_pi && checked == within_half; }
};

}  // namespace psum
