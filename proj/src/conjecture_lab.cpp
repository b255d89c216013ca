#include "psum/conjecture_lab.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace psum {

namespace {

real distance_to_integer(real v) { return std::fabs(v - std::nearbyint(v)); }

// RAII wrapper for one MPFR variable.
class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() noexcept { return v_; }

private:
    mpfr_t v_;
};

// lambda = ceil(a), a = 2(L+1); mu = floor(log L); L = lgamma(n+1) at high precision.
WindowParams escalated_params(std::uint64_t n, const PrecisionPolicy& policy) {
    // log n! < 2^64 for every representable n, so 64 integer bits suffice.
    const auto bits = static_cast<mpfr_prec_t>(policy.precision_bits + 64);
    Mpfr log_fact(bits), a(bits), log_log(bits), rounded(bits), diff(bits);

    mpfr_set_ui(a.get(), n + 1, MPFR_RNDN);
    mpfr_lngamma(log_fact.get(), a.get(), MPFR_RNDN);

    mpfr_add_ui(a.get(), log_fact.get(), 1, MPFR_RNDN);
    mpfr_mul_ui(a.get(), a.get(), 2, MPFR_RNDN);
    mpfr_log(log_log.get(), log_fact.get(), MPFR_RNDN);

    auto boundary_distance = [&](mpfr_ptr v) {
        mpfr_round(rounded.get(), v);
        mpfr_sub(diff.get(), v, rounded.get(), MPFR_RNDN);
        return std::fabs(mpfr_get_ld(diff.get(), MPFR_RNDN));
    };
    if (boundary_distance(a.get()) < policy.hard_guard || boundary_distance(log_log.get()) < policy.hard_guard) {
        throw inconclusive_error("log " + std::to_string(n) + "! sits on a rounding boundary at " +
                                 std::to_string(policy.precision_bits) + " bits");
    }

    WindowParams out;
    mpfr_ceil(rounded.get(), a.get());
    out.lambda = mpfr_get_si(rounded.get(), MPFR_RNDN);
    mpfr_floor(rounded.get(), log_log.get());
    out.mu = mpfr_get_si(rounded.get(), MPFR_RNDN);
    out.escalated = true;
    return out;
}

std::int64_t ipow(std::int64_t base, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= base;
    return r;
}

// Picks delta in (a, a + 1] intersected with [-2, 2], a integer.
std::optional<real> delta_for_offset(std::int64_t a) {
    if (a < -3 || a > 1) return std::nullopt;
    return static_cast<real>(a + 1);
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

std::vector<std::uint64_t> odd_primes_upto(std::uint64_t n, const PrimeTable& table) {
    const std::uint64_t count = table.pi(n);
    const auto primes = table.primes();
    return {primes.begin() + 1, primes.begin() + static_cast<std::ptrdiff_t>(count)};
}

}  // namespace

TrackedReal LogFactorial::at(std::uint64_t n) {
    if (n < n_) {
        n_ = 1;
        acc_ = CompensatedSum{};
    }
    while (n_ < n) acc_.add_log(++n_);
    return acc_.tracked();
}

WindowParams window_params(std::uint64_t n, const TrackedReal& log_factorial, const PrecisionPolicy& policy) {
    if (n <= 2) throw domain_error("prime window requires n > 2");
    const real two_l = 2 * (log_factorial.value + 1);
    const real log_log = std::log(log_factorial.value);
    const real log_log_error = log_factorial.error_bound / log_factorial.value + 2 * CompensatedSum::kEps;

    const bool near_boundary = distance_to_integer(two_l) < policy.guard ||
                               distance_to_integer(log_log) < policy.guard;
    const bool error_too_large = 2 * log_factorial.error_bound >= policy.guard || log_log_error >= policy.guard;
    if (near_boundary || error_too_large) return escalated_params(n, policy);

    WindowParams out;
    out.lambda = static_cast<std::int64_t>(std::ceil(two_l));
    out.mu = static_cast<std::int64_t>(std::floor(log_log));
    return out;
}

ScanRecord prime_window(std::uint64_t n, const PrimeTable& table, LogFactorial& cache,
                        const PrecisionPolicy& policy) {
    if (n <= 2) throw domain_error("prime window requires n > 2, got n = " + std::to_string(n));
    const std::uint64_t p_n = table.nth_prime(n);
    const WindowParams params = window_params(n, cache.at(n), policy);

    ScanRecord r;
    r.n = n;
    r.kind = ScanKind::prime_window;
    r.lower = params.lambda - ipow(params.mu, 3) - 2;
    r.upper = params.lambda - ipow(params.mu, 2) + 2;
    r.target = static_cast<std::int64_t>(p_n);
    r.witnesses = {{p_n}};
    r.status = (r.lower < r.target && r.target < r.upper) ? ScanStatus::pass : ScanStatus::violation;
    r.window = params;
    return r;
}

ScanRecord prime_window(std::uint64_t n, const PrimeTable& table, const PrecisionPolicy& policy) {
    LogFactorial cache;
    return prime_window(n, table, cache, policy);
}

std::vector<ScanRecord> scan_prime_window(std::uint64_t first, std::uint64_t last, const PrimeTable& table,
                                          const PrecisionPolicy& policy) {
    std::vector<ScanRecord> out;
    LogFactorial cache;
    for (std::uint64_t n = first; n <= last; ++n) {
        try {
            out.push_back(prime_window(n, table, cache, policy));
        } catch (const inconclusive_error&) {
            ScanRecord r;
            r.n = n;
            r.kind = ScanKind::prime_window;
            r.target = static_cast<std::int64_t>(table.nth_prime(n));
            r.status = ScanStatus::inconclusive;
            out.push_back(r);
        }
    }
    return out;
}

EpsilonDeltaFit fit_epsilon_delta(std::int64_t p_n, const WindowParams& params) {
    EpsilonDeltaFit fit;
    const std::int64_t lambda = params.lambda;
    const std::int64_t mu = params.mu;

    if (mu <= 1) {
        fit.degenerate = true;
        fit.convention = "mu in {0,1}: 0^(2+eps) = 0, 1^(2+eps) = 1; eps fixed at 0";
        const std::int64_t f = lambda - mu;  // mu^(2+eps) == mu for mu in {0, 1}
        if (auto d = delta_for_offset(p_n - 1 - f)) {
            fit.epsilon = 0;
            fit.delta = d;
        }
        return fit;
    }

    const real mu_r = static_cast<real>(mu);
    auto f = [&](real eps) { return static_cast<real>(lambda) - std::pow(mu_r, 2 + eps); };
    const real f_hi = static_cast<real>(lambda - mu * mu);       // eps = 0
    const real f_lo = static_cast<real>(lambda - mu * mu * mu);  // eps = 1

    // Candidate deltas ordered by distance from 0, step 1/4.
    for (int k = 0; k <= 8; ++k) {
        const int sign_count = k == 0 ? 1 : 2;
        for (int s = 0; s < sign_count; ++s) {
            const real delta = (s == 0 ? 1 : -1) * static_cast<real>(k) / 4;
            const real target = static_cast<real>(p_n) - real{0.5} - delta;
            if (target < f_lo || target > f_hi) continue;
            real lo = 0;
            real hi = 1;
            for (int it = 0; it < 80; ++it) {
                const real mid = (lo + hi) / 2;
                if (f(mid) > target) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            const real eps = (lo + hi) / 2;
            if (std::ceil(f(eps) + delta) == static_cast<real>(p_n)) {
                fit.epsilon = eps;
                fit.delta = delta;
                return fit;
            }
        }
    }
    // Integer endpoints eps = 0 and eps = 1.
    for (const auto& [eps, fv] : {std::pair<real, std::int64_t>{0, lambda - mu * mu},
                                  std::pair<real, std::int64_t>{1, lambda - mu * mu * mu}}) {
        if (auto d = delta_for_offset(p_n - 1 - fv)) {
            fit.epsilon = eps;
            fit.delta = d;
            return fit;
        }
    }
    return fit;
}

EpsilonDeltaFit fit_epsilon_delta(std::uint64_t n, const PrimeTable& table, const PrecisionPolicy& policy) {
    if (n <= 2) throw domain_error("epsilon/delta fit requires n > 2");
    LogFactorial lf;
    const WindowParams params = window_params(n, lf.at(n), policy);
    return fit_epsilon_delta(static_cast<std::int64_t>(table.nth_prime(n)), params);
}

UniformFitRegion::UniformFitRegion() : eps_(kGridSteps + 1) {}

void UniformFitRegion::add(std::int64_t p_n, const WindowParams& params) {
    ++observed_;
    const real mu = static_cast<real>(params.mu);
    for (int i = 0; i <= kGridSteps; ++i) {
        Interval& iv = eps_[i];
        if (iv.empty()) continue;
        // need A <= mu^(2+eps) < A + 1 with A = lambda + delta - p_n
        const real a = static_cast<real>(params.lambda - p_n) + delta_at(i);
        if (params.mu <= 1) {
            if (!(a <= mu && mu < a + 1)) iv = {1, 0};
            continue;
        }
        const real log_mu = std::log(mu);
        const real lo = a > 0 ? std::log(a) / log_mu - 2 : -std::numeric_limits<real>::infinity();
        const real hi = a + 1 > 0 ? std::log(a + 1) / log_mu - 2 : -std::numeric_limits<real>::infinity();
        iv.lo = std::max(iv.lo, lo);
        iv.hi = std::min(iv.hi, hi);
    }
}

int UniformFitRegion::feasible_points() const noexcept {
    return static_cast<int>(std::count_if(eps_.begin(), eps_.end(), [](const Interval& iv) { return !iv.empty(); }));
}

std::optional<std::pair<real, real>> UniformFitRegion::example() const {
    for (int i = 0; i <= kGridSteps; ++i) {
        if (!eps_[i].empty()) return std::pair{eps_[i].lo, delta_at(i)};
    }
    return std::nullopt;
}

std::uint64_t odd_product_set_size(std::uint64_t n, const PrimeTable& table) {
    const std::uint64_t m = table.pi(n) - (n >= 2 ? 1 : 0);
    return m * (m + 1) / 2;
}

ScanRecord find_collision(std::uint64_t n, const PrimeTable& table) {
    if (n < 5) throw domain_error("collision search requires n >= 5, got n = " + std::to_string(n));
    const auto odd = odd_primes_upto(n, table);
    const std::uint64_t m = odd.size();

    ScanRecord r;
    r.n = n;
    r.kind = ScanKind::collision;
    r.target = static_cast<std::int64_t>(n);
    r.status = ScanStatus::not_found;

    // residue -> first pair (i * m + j) that produced it
    std::vector<std::int64_t> first_pair(n, -1);
    for (std::uint64_t i = 0; i < m; ++i) {
        for (std::uint64_t j = i; j < m; ++j) {
            const std::uint64_t residue = mulmod(odd[i], odd[j], n);
            const std::int64_t packed = static_cast<std::int64_t>(i * m + j);
            if (first_pair[residue] < 0) {
                first_pair[residue] = packed;
                continue;
            }
            const auto prev = static_cast<std::uint64_t>(first_pair[residue]);
            r.witnesses = {{odd[prev / m], odd[prev % m]}, {odd[i], odd[j]}};
            r.status = ScanStatus::pass;
            return r;
        }
    }
    return r;
}

ScanRecord goldbach_congruence(std::uint64_t n, const PrimeTable& table) {
    if (n < 6 || n % 2 != 0) {
        throw domain_error("goldbach congruence requires even n >= 6, got n = " + std::to_string(n));
    }
    if (n > table.limit()) throw range_error("goldbach congruence at n = " + std::to_string(n) + " exceeds table");

    ScanRecord r;
    r.n = n;
    r.kind = ScanKind::goldbach_cong;
    r.target = static_cast<std::int64_t>(n);
    r.status = ScanStatus::not_found;

    std::optional<std::uint64_t> pm;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> split;
    const auto primes = table.primes();
    for (std::size_t i = 1; i < primes.size() && primes[i] <= n; ++i) {
        const std::uint64_t p = primes[i];
        if (!pm && n % p != 0) pm = p;
        if (!split && 2 * p <= n && table.is_prime(n - p)) split = std::pair{p, n - p};
        if (pm && split) break;
    }
    if (pm && split) {
        r.witnesses = {{*pm, split->first, split->second}};
        r.status = ScanStatus::pass;
    }
    return r;
}

bool is_prime_u64(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (const std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (const std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int k = 1; k < s; ++k) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool self_verify(const ScanRecord& record) {
    const auto& w = record.witnesses;
    if (w.empty()) return true;
    for (const auto& tuple : w) {
        for (const std::uint64_t p : tuple) {
            if (!is_prime_u64(p)) return false;
        }
    }
    const auto n = static_cast<std::uint64_t>(record.target);
    switch (record.kind) {
        case ScanKind::prime_window: {
            if (w.size() != 1 || w[0].size() != 1) return false;
            const auto p = static_cast<std::int64_t>(w[0][0]);
            const bool inside = record.lower < p && p < record.upper;
            return p == record.target && inside == (record.status == ScanStatus::pass);
        }
        case ScanKind::collision: {
            if (w.size() != 2 || w[0].size() != 2 || w[1].size() != 2) return false;
            auto sorted = [](std::vector<std::uint64_t> v) {
                std::sort(v.begin(), v.end());
                return v;
            };
            if (sorted(w[0]) == sorted(w[1])) return false;
            for (const auto& pair : w) {
                for (const std::uint64_t p : pair) {
                    if (p == 2 || p > n) return false;
                }
            }
            return mulmod(w[0][0], w[0][1], n) == mulmod(w[1][0], w[1][1], n);
        }
        case ScanKind::goldbach_cong: {
            if (w.size() != 1 || w[0].size() != 3) return false;
            const std::uint64_t pm = w[0][0], po = w[0][1], pt = w[0][2];
            if (pm == 2 || po == 2 || pt == 2 || std::gcd(pm, n) != 1) return false;
            // pm*po = -pm*pt (mod n)
            return (mulmod(pm, po, n) + mulmod(pm, pt, n)) % n == 0 && po + pt == n;
        }
    }
    return false;
}

std::string_view to_string(ScanKind kind) noexcept {
    switch (kind) {
        case ScanKind::prime_window: return "PRIME_WINDOW";
        case ScanKind::collision: return "COLLISION";
        case ScanKind::goldbach_cong: return "GOLDBACH_CONG";
    }
    return "?";
}

std::string_view to_string(ScanStatus status) noexcept {
    switch (status) {
        case ScanStatus::pass: return "PASS";
        case ScanStatus::violation: return "VIOLATION";
        case ScanStatus::not_found: return "NOT_FOUND";
        case ScanStatus::inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

}  // namespace psum
