#pragma once

#include <string>
#include <string_view>

#include "psum/conjecture_lab.hpp"
#include "psum/identity_suite.hpp"
#include "psum/upsilon.hpp"

namespace psum {

/// 15 significant digits; non-finite values become null.
std::string format_real(real v);

std::string_view to_string(IdentityId id) noexcept;

/// {"identity": ..., "x": N, "lhs": ..., "rhs": ..., "residual": R, "exact": bool, "ms": T}
std::string to_json(const VerificationReport& report, bool with_timing = true);
std::string to_csv(const VerificationReport& report, bool with_timing = true);
inline constexpr std::string_view kReportCsvHeader = "identity,x,lhs,rhs,residual,exact,ms";

/// {"kind": ..., "n": N, "lower": L, "upper": U, "target": T, "witnesses": [[...]], "status": ...}
/// plus lambda/mu (and epsilon/delta when a fit is given) for prime-window records.
std::string to_json(const ScanRecord& record, const EpsilonDeltaFit* fit = nullptr);
std::string to_csv(const ScanRecord& record);
inline constexpr std::string_view kScanCsvHeader = "kind,n,lower,upper,target,witnesses,status";

std::string to_json(const TrendRow& row);
std::string to_csv(const TrendRow& row);
inline constexpr std::string_view kTrendCsvHeader = "x,mertens_sum,logx_loglogx,ratio";

/// Upsilon record; the summary fields are null for x < 16.
std::string to_json(const UpsilonSums& sums, const UpsilonSummary* summary, bool agree);
std::string to_csv(const UpsilonSums& sums, const UpsilonSummary* summary, bool agree);
inline constexpr std::string_view kUpsilonCsvHeader =
    "x,sum_direct,sum_lemma,sum_logsemiprime,mertens_sum,ratio,agree";

}  // namespace psum
