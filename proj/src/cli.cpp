#include "psum/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <thread>

#include "psum/conjecture_lab.hpp"
#include "psum/report_io.hpp"
#include "psum/upsilon.hpp"

namespace psum::cli {

namespace {

const std::map<std::string, Command> kCommands{
    {"thm1", Command::thm1},           {"thm2", Command::thm2},
    {"pi-formula", Command::pi_formula}, {"upsilon", Command::upsilon},
    {"trend", Command::trend},         {"prime-window", Command::prime_window},
    {"collision", Command::collision}, {"goldbach", Command::goldbach},
};

constexpr std::size_t kBlock = 1024;
constexpr real kUpsilonAgreement = 1e-9L;

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || text.front() == '-') {
        throw usage_error("invalid " + what + ": '" + text + "'");
    }
    return v;
}

// Runs fn(i) for i in [0, count) over `threads` workers; results are written by index.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    }
}

struct Tally {
    std::uint64_t checked = 0;
    std::uint64_t exact = 0;
    std::uint64_t violations = 0;
    std::uint64_t inconclusive = 0;
};

struct StatusCounts {
    std::map<ScanStatus, std::uint64_t> by_status;
    std::uint64_t self_verified = 0;
    std::uint64_t with_witness = 0;

    void add(const ScanRecord& r, bool verified) {
        ++by_status[r.status];
        if (!r.witnesses.empty()) {
            ++with_witness;
            if (verified) ++self_verified;
        }
    }

    std::string json(std::uint64_t checked) const {
        std::string out = "\"checked\": " + std::to_string(checked);
        for (const ScanStatus s : {ScanStatus::pass, ScanStatus::violation, ScanStatus::not_found,
                                   ScanStatus::inconclusive}) {
            const auto it = by_status.find(s);
            out += ", \"";
            out += to_string(s);
            out += "\": " + std::to_string(it == by_status.end() ? 0 : it->second);
        }
        out += ", \"witnessed\": " + std::to_string(with_witness);
        out += ", \"self_verified\": " + std::to_string(self_verified);
        return out;
    }
};

// nth prime <= n (ln n + ln ln n) for n >= 6.
std::uint64_t nth_prime_bound(std::uint64_t n) {
    if (n < 6) return 13;
    const double x = static_cast<double>(n);
    return static_cast<std::uint64_t>(x * (std::log(x) + std::log(std::log(x)))) + 3;
}

class Session {
public:
    Session(const RunConfig& config, std::ostream& out, std::ostream& err)
        : config_(config), out_(out), err_(err),
          threads_(config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency())) {}

    int execute();

private:
    void validate(const std::vector<std::uint64_t>& xs) const;
    std::uint64_t required_limit(const std::vector<std::uint64_t>& xs) const;
    void prepare_tables(std::uint64_t needed, bool want_sieve);
    PrimeTable load_or_build(std::uint64_t limit) const;

    void write(const std::string& line) { out_ << line << '\n'; }
    void write_header(std::string_view header) {
        if (config_.format == OutputFormat::csv) write(std::string(header));
    }
    bool json() const noexcept { return config_.format == OutputFormat::json; }

    void run_identity(const std::vector<std::uint64_t>& xs);
    void run_upsilon(const std::vector<std::uint64_t>& xs);
    void run_trend(const std::vector<std::uint64_t>& xs);
    void run_prime_window(const std::vector<std::uint64_t>& xs);
    void run_scan(const std::vector<std::uint64_t>& xs);

    const RunConfig& config_;
    std::ostream& out_;
    std::ostream& err_;
    unsigned threads_;
    std::optional<PrimeTable> table_;
    std::optional<FactorSieve> sieve_;
    Tally tally_;
};

void Session::validate(const std::vector<std::uint64_t>& xs) const {
    for (const std::uint64_t x : xs) {
        switch (config_.command) {
            case Command::thm1:
                if (x < 5) throw domain_error("thm1: hypothesis x >= 5 violated by x = " + std::to_string(x));
                break;
            case Command::thm2:
                if (x < 1) throw domain_error("thm2: x must be positive");
                break;
            case Command::pi_formula:
                if (x < 2) throw domain_error("pi-formula: x >= 2 required (division by log x)");
                break;
            case Command::upsilon:
                if (x < 1) throw domain_error("upsilon: x must be positive");
                break;
            case Command::trend:
                if (x < 16) throw domain_error("trend: x >= 16 required (log log x > 0)");
                break;
            case Command::prime_window:
                if (x <= 2) throw domain_error("prime-window: n > 2 required, got " + std::to_string(x));
                break;
            case Command::collision:
                if (x < 5) throw domain_error("collision: n >= 5 required, got " + std::to_string(x));
                break;
            case Command::goldbach:
                if (x < 6 || x % 2) throw domain_error("goldbach: even n >= 6 required, got " + std::to_string(x));
                break;
        }
    }
}

std::uint64_t Session::required_limit(const std::vector<std::uint64_t>& xs) const {
    const std::uint64_t top = xs.empty() ? 2 : xs.back();
    switch (config_.command) {
        case Command::thm2: return 0;
        case Command::prime_window: return nth_prime_bound(top);
        default: return std::max<std::uint64_t>(top, 2);
    }
}

PrimeTable Session::load_or_build(std::uint64_t limit) const {
    SieveOptions options;
    options.threads = threads_;
    options.memory_budget = config_.memory_budget;

    std::optional<std::filesystem::path> dir = config_.cache_dir;
    if (!dir) {
        if (const char* env = std::getenv(kCacheDirEnv); env && *env) dir = env;
    }
    if (!dir) return build_prime_table(limit, options);

    const auto path = *dir / ("primes-" + std::to_string(limit) + ".psum");
    if (std::filesystem::exists(path)) {
        try {
            return load_prime_table(path);
        } catch (const std::exception& e) {
            err_ << "warning: ignoring unreadable cache " << path.string() << ": " << e.what() << '\n';
        }
    }
    PrimeTable table = build_prime_table(limit, options);
    std::error_code ec;
    std::filesystem::create_directories(*dir, ec);
    try {
        save_prime_table(table, path);
    } catch (const std::exception& e) {
        err_ << "warning: could not write cache " << path.string() << ": " << e.what() << '\n';
    }
    return table;
}

void Session::prepare_tables(std::uint64_t needed, bool want_sieve) {
    std::uint64_t limit = config_.sieve_limit;
    if (limit < needed) {
        if (limit != 0) {
            err_ << "warning: --sieve-limit " << limit << " below required " << needed << "; raised\n";
        }
        limit = needed;
    }
    table_.emplace(load_or_build(limit));
    if (want_sieve) sieve_.emplace(build_factor_sieve(limit, config_.memory_budget));
}

void Session::run_identity(const std::vector<std::uint64_t>& xs) {
    write_header(kReportCsvHeader);
    VariantAudit audits[2] = {{ParityVariant::statement}, {ParityVariant::proof}};
    const bool pi_cmd = config_.command == Command::pi_formula;

    std::vector<VerificationReport> reports;
    std::vector<PiReconstruction> recs[2];
    for (std::size_t base = 0; base < xs.size(); base += kBlock) {
        const std::size_t count = std::min(kBlock, xs.size() - base);
        reports.assign(count, {});
        if (pi_cmd) {
            recs[0].assign(count, {});
            recs[1].assign(count, {});
        }
        parallel_for(count, threads_, [&](std::size_t i) {
            const std::uint64_t x = xs[base + i];
            switch (config_.command) {
                case Command::thm1: reports[i] = verify_theorem1(x, *table_); break;
                case Command::thm2: reports[i] = verify_theorem2(x); break;
                default:
                    reports[i] = verify_pi_formula(x, *table_, *sieve_, config_.variant);
                    recs[0][i] = reconstruct_pi(x, *table_, *sieve_, ParityVariant::statement);
                    recs[1][i] = reconstruct_pi(x, *table_, *sieve_, ParityVariant::proof);
                    break;
            }
        });
        for (std::size_t i = 0; i < count; ++i) {
            const VerificationReport& r = reports[i];
            write(json() ? to_json(r, config_.timing) : to_csv(r, config_.timing));
            ++tally_.checked;
            if (r.exact) ++tally_.exact;
            if (r.inconclusive) {
                ++tally_.inconclusive;
            } else if (!r.passed()) {
                ++tally_.violations;
            }
            if (pi_cmd) {
                const std::uint64_t pi = table_->pi(xs[base + i]);
                audits[0].add(recs[0][i], pi);
                audits[1].add(recs[1][i], pi);
            }
        }
        out_.flush();
    }

    if (!pi_cmd) return;
    auto audit_json = [](const VariantAudit& a) {
        return "{\"checked\": " + std::to_string(a.checked) + ", \"rounds_to_pi\": " + std::to_string(a.rounds_to_pi) +
               ", \"within_half\": " + std::to_string(a.within_half) +
               ", \"max_abs_residual\": " + format_real(a.max_abs_residual) + "}";
    };
    // The variant that is an identity, not merely close enough to round correctly.
    std::string exact_variant = "none";
    for (const auto& a : audits) {
        if (a.all_round() && a.max_abs_residual < 1e-9L) {
            exact_variant = a.variant == ParityVariant::statement ? "statement" : "proof";
            break;
        }
    }
    const std::string line = "{\"audit\": {\"statement\": " + audit_json(audits[0]) +
                             ", \"proof\": " + audit_json(audits[1]) + ", \"exact_variant\": \"" + exact_variant +
                             "\"}}";
    if (json()) {
        write(line);
    } else {
        err_ << line << '\n';
    }
}

void Session::run_upsilon(const std::vector<std::uint64_t>& xs) {
    write_header(kUpsilonCsvHeader);
    for (const std::uint64_t x : xs) {
        const UpsilonSums sums = upsilon_sums(x, *table_, *sieve_);
        std::optional<UpsilonSummary> summary;
        if (x >= 16) summary = summarize(x, *table_, *sieve_);
        const bool agree = sums.max_relative_spread() <= kUpsilonAgreement;
        write(json() ? to_json(sums, summary ? &*summary : nullptr, agree)
                     : to_csv(sums, summary ? &*summary : nullptr, agree));
        ++tally_.checked;
        if (!agree) ++tally_.violations;
    }
}

void Session::run_trend(const std::vector<std::uint64_t>& xs) {
    write_header(kTrendCsvHeader);
    for (const TrendRow& row : trend_table(xs, *table_)) {
        write(json() ? to_json(row) : to_csv(row));
        ++tally_.checked;
        if (!std::isfinite(row.ratio) || row.ratio <= 0) ++tally_.violations;
    }
}

void Session::run_prime_window(const std::vector<std::uint64_t>& xs) {
    write_header(kScanCsvHeader);
    PrecisionPolicy policy;
    policy.precision_bits = config_.precision_bits;
    LogFactorial cache;
    UniformFitRegion region;
    StatusCounts counts;
    std::uint64_t escalated = 0;
    for (const std::uint64_t n : xs) {
        ScanRecord r;
        std::optional<EpsilonDeltaFit> fit;
        try {
            r = prime_window(n, *table_, cache, policy);
            fit = fit_epsilon_delta(r.target, *r.window);
            region.add(r.target, *r.window);
            if (r.window->escalated) ++escalated;
        } catch (const inconclusive_error& e) {
            r = {};
            r.n = n;
            r.kind = ScanKind::prime_window;
            r.target = static_cast<std::int64_t>(table_->nth_prime(n));
            r.status = ScanStatus::inconclusive;
            err_ << "inconclusive: " << e.what() << '\n';
        }
        const bool verified = self_verify(r);
        write(json() ? to_json(r, fit ? &*fit : nullptr) : to_csv(r));
        counts.add(r, verified);
        ++tally_.checked;
        if (r.status == ScanStatus::inconclusive) ++tally_.inconclusive;
        if (r.status == ScanStatus::violation || !verified) ++tally_.violations;
    }
    if (!json()) return;
    std::string fit_json = "{\"observed\": " + std::to_string(region.observed()) +
                           ", \"feasible_delta_points\": " + std::to_string(region.feasible_points()) +
                           ", \"example\": ";
    if (const auto ex = region.example()) {
        fit_json += "[" + format_real(ex->first) + ", " + format_real(ex->second) + "]";
    } else {
        fit_json += "null";
    }
    fit_json += "}";
    write("{\"summary\": {" + counts.json(tally_.checked) + ", \"escalated\": " + std::to_string(escalated) +
          ", \"uniform_fit\": " + fit_json + "}}");
}

void Session::run_scan(const std::vector<std::uint64_t>& xs) {
    write_header(kScanCsvHeader);
    const bool collision = config_.command == Command::collision;
    StatusCounts counts;
    std::vector<ScanRecord> records;
    std::vector<char> verified;
    for (std::size_t base = 0; base < xs.size(); base += kBlock) {
        const std::size_t count = std::min(kBlock, xs.size() - base);
        records.assign(count, {});
        verified.assign(count, 0);
        parallel_for(count, threads_, [&](std::size_t i) {
            const std::uint64_t n = xs[base + i];
            records[i] = collision ? find_collision(n, *table_) : goldbach_congruence(n, *table_);
            verified[i] = self_verify(records[i]);
        });
        for (std::size_t i = 0; i < count; ++i) {
            const ScanRecord& r = records[i];
            write(json() ? to_json(r) : to_csv(r));
            counts.add(r, verified[i]);
            ++tally_.checked;
            bool bad = !verified[i];
            if (r.status == ScanStatus::not_found) {
                // A missing collision contradicts pigeonhole only once #S > n.
                bad = bad || !collision || odd_product_set_size(r.n, *table_) > r.n;
            }
            if (bad) ++tally_.violations;
        }
        out_.flush();
    }
    if (json()) write("{\"summary\": {" + counts.json(tally_.checked) + "}}");
}

int Session::execute() {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::uint64_t> xs = expand_inputs(config_);
    validate(xs);

    const bool want_sieve = config_.command == Command::pi_formula || config_.command == Command::upsilon;
    if (config_.command != Command::thm2) prepare_tables(required_limit(xs), want_sieve);

    switch (config_.command) {
        case Command::thm1:
        case Command::thm2:
        case Command::pi_formula: run_identity(xs); break;
        case Command::upsilon: run_upsilon(xs); break;
        case Command::trend: run_trend(xs); break;
        case Command::prime_window: run_prime_window(xs); break;
        case Command::collision:
        case Command::goldbach: run_scan(xs); break;
    }
    out_.flush();

    const double elapsed =
        config_.timing ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() : 0.0;
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.3f", elapsed);
    err_ << "checked=" << tally_.checked << " exact=" << tally_.exact << " violations=" << tally_.violations
         << " inconclusive=" << tally_.inconclusive << " elapsed=" << secs << "s\n";
    return (tally_.violations == 0 && tally_.inconclusive == 0) ? 0 : 1;
}

std::vector<std::uint64_t> sample_inputs(const SampleSpec& s, std::uint64_t seed) {
    if (s.max < s.min) throw usage_error("--max must be >= --min");
    const std::uint64_t span = s.max - s.min + 1;
    if (span != 0 && s.count > span) throw usage_error("--sample exceeds the number of distinct values");
    std::mt19937_64 rng(seed);
    std::set<std::uint64_t> picked;
    while (picked.size() < s.count) {
        std::uint64_t v = rng();
        if (span != 0) {
            // Rejection keeps the draw exactly uniform.
            const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / span * span;
            while (v >= limit) v = rng();
            v = s.min + v % span;
        }
        picked.insert(v);
    }
    return {picked.begin(), picked.end()};
}

}  // namespace

IntRange parse_range(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t colon = text.find(':', pos);
        parts.push_back(text.substr(pos, colon - pos));
        if (colon == std::string::npos) break;
        pos = colon + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) throw usage_error("--range expects A:B or A:B:S, got '" + text + "'");
    IntRange r;
    r.start = parse_u64(parts[0], "--range start");
    r.end = parse_u64(parts[1], "--range end");
    if (parts.size() == 3) r.step = parse_u64(parts[2], "--range step");
    if (r.start > r.end) throw usage_error("--range start must not exceed end");
    if (r.step == 0) throw usage_error("--range step must be positive");
    return r;
}

std::vector<std::uint64_t> expand_inputs(const RunConfig& config) {
    const int sources = (config.range ? 1 : 0) + (config.sample ? 1 : 0) + (config.points.empty() ? 0 : 1);
    if (sources != 1) throw usage_error("exactly one of --range, --sample, --n is required");

    std::vector<std::uint64_t> xs;
    if (config.range) {
        const IntRange& r = *config.range;
        for (std::uint64_t x = r.start; x <= r.end; x += r.step) {
            // Goldbach ranges address the even n inside the range.
            if (config.command != Command::goldbach || x % 2 == 0) xs.push_back(x);
            if (r.end - x < r.step) break;
        }
    } else if (config.sample) {
        if (!config.seed) throw usage_error("--sample requires --seed");
        xs = sample_inputs(*config.sample, *config.seed);
    } else {
        xs = config.points;
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    }
    return xs;
}

std::optional<RunConfig> parse_command_line(const std::vector<std::string>& args, std::ostream& out) {
    CLI::App app{"psum: sieve-backed checks of prime-sum identities and conjecture scans", "psum"};
    RunConfig config;
    std::string command;
    std::string range;
    std::uint64_t sample = 0;
    std::uint64_t sample_min = 1;
    std::uint64_t sample_max = 0;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string variant = "statement";
    std::string cache_dir;
    std::uint64_t memory_mb = 8192;

    std::vector<std::string> names;
    for (const auto& [name, _] : kCommands) names.push_back(name);
    app.add_option("command", command, "Subcommand")->required()->check(CLI::IsMember(names));
    auto* range_opt = app.add_option("--range", range, "A:B[:S] inclusive range");
    auto* sample_opt = app.add_option("--sample", sample, "Number of seeded uniform samples");
    app.add_option("--min", sample_min, "Smallest sampled value")->needs(sample_opt);
    auto* max_opt = app.add_option("--max", sample_max, "Largest sampled value")->needs(sample_opt);
    auto* seed_opt = app.add_option("--seed", seed, "Sampler seed");
    sample_opt->needs(max_opt);
    auto* n_opt = app.add_option("--n,--x", config.points, "Explicit inputs (comma separated)")->delimiter(',');
    range_opt->excludes(sample_opt)->excludes(n_opt);
    sample_opt->excludes(n_opt);
    app.add_option("--sieve-limit", config.sieve_limit, "Prime table / factor sieve limit");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", config.output, "Output path, '-' for stdout");
    app.add_option("--precision-bits", config.precision_bits, "Fractional bits for escalated evaluation")
        ->check(CLI::Range(64u, 4096u));
    app.add_option("--variant", variant, "pi-formula parity term: statement or proof")
        ->check(CLI::IsMember({"statement", "proof"}));
    app.add_option("--threads", config.threads, "Worker threads (0 = all cores)");
    app.add_option("--cache-dir", cache_dir, std::string("Prime table cache directory (default $") + kCacheDirEnv + ")");
    app.add_option("--max-memory-mb", memory_mb, "Memory budget for tables");
    bool no_timing = false;
    app.add_flag("--no-timing", no_timing, "Zero all timing fields for reproducible output");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw usage_error(e.what());
    }

    config.command = kCommands.at(command);
    if (!range.empty()) config.range = parse_range(range);
    if (*sample_opt) config.sample = SampleSpec{sample, sample_min, sample_max};
    if (*seed_opt) config.seed = seed;
    config.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
    config.variant = variant == "proof" ? ParityVariant::proof : ParityVariant::statement;
    if (!cache_dir.empty()) config.cache_dir = cache_dir;
    config.memory_budget = memory_mb << 20;
    config.timing = !no_timing;
    return config;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        std::ofstream file;
        std::ostream* sink = &out;
        if (config.output != "-") {
            file.open(config.output, std::ios::trunc);
            if (!file) throw usage_error("cannot open --out " + config.output);
            sink = &file;
        }
        Session session(config, *sink, err);
        return session.execute();
    } catch (const usage_error& e) {
        err << "usage error: " << e.what() << '\n';
    } catch (const domain_error& e) {
        err << "domain error: " << e.what() << '\n';
    } catch (const range_error& e) {
        err << "range error: " << e.what() << '\n';
    } catch (const resource_error& e) {
        err << "resource error: " << e.what() << '\n';
    } catch (const std::bad_alloc&) {
        err << "resource error: out of memory\n";
    }
    return 2;
}

int main_entry(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const auto config = parse_command_line(args, std::cout);
        if (!config) return 0;
        return run(*config, std::cout, std::cerr);
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace psum::cli
