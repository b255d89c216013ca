#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "psum/identity_suite.hpp"

namespace psum::cli {

enum class Command { thm1, thm2, pi_formula, upsilon, trend, prime_window, collision, goldbach };
enum class OutputFormat { json, csv };

struct IntRange {
    std::uint64_t start = 0;
    std::uint64_t end = 0;
    std::uint64_t step = 1;
};

struct SampleSpec {
    std::uint64_t count = 0;
    std::uint64_t min = 1;
    std::uint64_t max = 0;
};

struct RunConfig {
    Command command = Command::thm2;
    std::optional<IntRange> range;
    std::optional<SampleSpec> sample;
    std::vector<std::uint64_t> points;
    /// 0 = size from the inputs; smaller than needed is raised with a warning.
    std::uint64_t sieve_limit = 0;
    std::string output = "-";
    OutputFormat format = OutputFormat::json;
    /// Required with sample.
    std::optional<std::uint64_t> seed;
    unsigned precision_bits = 128;
    ParityVariant variant = ParityVariant::statement;
    /// 0 = hardware concurrency.
    unsigned threads = 0;
    /// false zeroes every timing field so output is byte-reproducible.
    bool timing = true;
    std::optional<std::filesystem::path> cache_dir;
    std::uint64_t memory_budget = std::uint64_t{8} << 30;
};

class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr const char* kCacheDirEnv = "PSUM_CACHE_DIR";

/// "A:B" or "A:B:S".
IntRange parse_range(const std::string& text);

/// Returns nullopt when help was requested (and printed to out).
std::optional<RunConfig> parse_command_line(const std::vector<std::string>& args, std::ostream& out);

/// Sorted inputs selected by points, range or seeded sample.
std::vector<std::uint64_t> expand_inputs(const RunConfig& config);

/// 0: everything passed; 1: a residual, violation or inconclusive record; 2: usage/resource error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// argv entry point used by the psum executable.
int main_entry(int argc, char** argv);

}  // namespace psum::cli
