#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psum/numeric.hpp"
#include "psum/prime_engine.hpp"

namespace psum {

enum class ScanKind { prime_window, collision, goldbach_cong };
enum class ScanStatus { pass, violation, not_found, inconclusive };

/// lambda_n = ceil(2(log n! + 1)) and mu_n = floor(log log n!).
struct WindowParams {
    std::int64_t lambda = 0;
    std::int64_t mu = 0;
    /// True when the boundary guard forced a high-precision recomputation.
    bool escalated = false;
};

struct ScanRecord {
    std::uint64_t n = 0;
    ScanKind kind = ScanKind::prime_window;
    /// Window bounds for PRIME_WINDOW; 0 for the other kinds.
    std::int64_t lower = 0;
    std::int64_t upper = 0;
    /// p_n for PRIME_WINDOW, the modulus n otherwise.
    std::int64_t target = 0;
    /// PRIME_WINDOW: {{p_n}}; COLLISION: {{pa,pb},{px,py}}; GOLDBACH_CONG: {{pm,po,pt}}.
    std::vector<std::vector<std::uint64_t>> witnesses;
    ScanStatus status = ScanStatus::not_found;
    std::optional<WindowParams> window;
};

struct PrecisionPolicy {
    /// Fractional bits of the escalated evaluation.
    unsigned precision_bits = 128;
    /// Distance to a rounding discontinuity below which the fast path is not trusted.
    real guard = 1e-9L;
    /// Distance below which even the escalated value is refused.
    real hard_guard = 1e-18L;
};

/// Running log n! = sum_{k=2}^{n} log k with a tracked error bound.
class LogFactorial {
public:
    /// Advances to n (restarting if n is behind the cursor).
    TrackedReal at(std::uint64_t n);

private:
    std::uint64_t n_ = 1;
    CompensatedSum acc_;
};

/// Throws inconclusive_error if a ceiling/floor cannot be decided.
WindowParams window_params(std::uint64_t n, const TrackedReal& log_factorial, const PrecisionPolicy& policy = {});

/// Checks p_n in ]lambda - mu^3 - 2, lambda - mu^2 + 2[. Requires n > 2.
ScanRecord prime_window(std::uint64_t n, const PrimeTable& table, const PrecisionPolicy& policy = {});
ScanRecord prime_window(std::uint64_t n, const PrimeTable& table, LogFactorial& cache,
                        const PrecisionPolicy& policy = {});

/// Scans n in [first, last]; inconclusive n become records with status inconclusive.
std::vector<ScanRecord> scan_prime_window(std::uint64_t first, std::uint64_t last, const PrimeTable& table,
                                          const PrecisionPolicy& policy = {});

struct EpsilonDeltaFit {
    std::optional<real> epsilon;
    std::optional<real> delta;
    /// mu <= 1: mu^(2+eps) does not depend on eps; eps is reported as 0.
    bool degenerate = false;
    std::string convention;

    bool found() const noexcept { return epsilon.has_value() && delta.has_value(); }
};

/// Finds eps in [0,1], delta in [-2,2] with p_n = ceil(lambda - mu^(2+eps) + delta).
EpsilonDeltaFit fit_epsilon_delta(std::int64_t p_n, const WindowParams& params);
EpsilonDeltaFit fit_epsilon_delta(std::uint64_t n, const PrimeTable& table, const PrecisionPolicy& policy = {});

/// Intersection over a scan of the feasible (eps, delta) sets, on a delta grid.
class UniformFitRegion {
public:
    static constexpr int kGridSteps = 160;  // delta step 1/40 over [-2, 2]

    UniformFitRegion();
    void add(std::int64_t p_n, const WindowParams& params);

    std::uint64_t observed() const noexcept { return observed_; }
    /// Number of delta grid points that still admit some eps.
    int feasible_points() const noexcept;
    bool empty() const noexcept { return feasible_points() == 0; }
    /// First surviving (eps, delta), if any.
    std::optional<std::pair<real, real>> example() const;

private:
    struct Interval {
        real lo = 0;
        real hi = 1;
        bool empty() const noexcept { return lo > hi; }
    };
    static real delta_at(int i) noexcept { return -2 + static_cast<real>(i) / 40; }

    std::vector<Interval> eps_;
    std::uint64_t observed_ = 0;
};

/// Size of the odd-prime product set {p*q : p <= q odd primes <= n}.
std::uint64_t odd_product_set_size(std::uint64_t n, const PrimeTable& table);

/// First pair-of-pairs, in lexicographic order of (i <= j) over odd primes <= n,
/// whose products agree mod n. NOT_FOUND is possible for small n. Requires n >= 5.
ScanRecord find_collision(std::uint64_t n, const PrimeTable& table);

/// Odd primes po <= pt with po + pt = n (smallest po) and the smallest odd prime pm
/// not dividing n. Requires even n >= 6.
ScanRecord goldbach_congruence(std::uint64_t n, const PrimeTable& table);

/// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime_u64(std::uint64_t n) noexcept;

/// Recomputes a record's claim from its witnesses with exact integer arithmetic and
/// an independent primality test. Records without witnesses verify trivially.
bool self_verify(const ScanRecord& record);

std::string_view to_string(ScanKind kind) noexcept;
std::string_view to_string(ScanStatus status) noexcept;

}  // namespace psum
