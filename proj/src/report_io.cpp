#include "psum/report_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>

namespace psum {

namespace {

std::string format_quantity(const Quantity& q) {
    if (const auto* i = std::get_if<std::int64_t>(&q)) return std::to_string(*i);
    return format_real(std::get<real>(q));
}

real elapsed_ms(const VerificationReport& r, bool with_timing) {
    return with_timing ? static_cast<real>(r.elapsed.count()) / 1e6L : 0;
}

std::string witnesses_json(const ScanRecord& r) {
    std::string out = "[";
    for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
        if (i) out += ',';
        out += '[';
        for (std::size_t j = 0; j < r.witnesses[i].size(); ++j) {
            if (j) out += ',';
            out += std::to_string(r.witnesses[i][j]);
        }
        out += ']';
    }
    return out + ']';
}

}  // namespace

std::string format_real(real v) {
    if (!std::isfinite(v)) return "null";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15Lg", v);
    return buf;
}

std::string_view to_string(IdentityId id) noexcept {
    switch (id) {
        case IdentityId::thm1: return "THM1";
        case IdentityId::thm2: return "THM2";
        case IdentityId::cor_pi: return "COR_PI";
    }
    return "?";
}

std::string to_json(const VerificationReport& r, bool with_timing) {
    std::string out = "{\"identity\": \"";
    out += to_string(r.identity);
    out += "\", \"x\": " + std::to_string(r.x);
    out += ", \"lhs\": " + format_quantity(r.lhs);
    out += ", \"rhs\": " + format_quantity(r.rhs);
    out += ", \"residual\": " + format_real(r.residual);
    out += std::string(", \"exact\": ") + (r.exact ? "true" : "false");
    if (r.identity == IdentityId::cor_pi) out += std::string(", \"inconclusive\": ") + (r.inconclusive ? "true" : "false");
    out += ", \"ms\": " + format_real(elapsed_ms(r, with_timing)) + "}";
    return out;
}

std::string to_csv(const VerificationReport& r, bool with_timing) {
    std::string out(to_string(r.identity));
    out += ',' + std::to_string(r.x) + ',' + format_quantity(r.lhs) + ',' + format_quantity(r.rhs) + ',' +
           format_real(r.residual) + ',' + (r.exact ? "true" : "false") + ',' +
           format_real(elapsed_ms(r, with_timing));
    return out;
}

std::string to_json(const ScanRecord& r, const EpsilonDeltaFit* fit) {
    std::string out = "{\"kind\": \"";
    out += to_string(r.kind);
    out += "\", \"n\": " + std::to_string(r.n);
    out += ", \"lower\": " + std::to_string(r.lower);
    out += ", \"upper\": " + std::to_string(r.upper);
    out += ", \"target\": " + std::to_string(r.target);
    out += ", \"witnesses\": " + witnesses_json(r);
    out += ", \"status\": \"";
    out += to_string(r.status);
    out += '"';
    if (r.window) {
        out += ", \"lambda\": " + std::to_string(r.window->lambda) + ", \"mu\": " + std::to_string(r.window->mu);
        out += std::string(", \"escalated\": ") + (r.window->escalated ? "true" : "false");
    }
    if (fit) {
        out += ", \"epsilon\": " + (fit->epsilon ? format_real(*fit->epsilon) : std::string("null"));
        out += ", \"delta\": " + (fit->delta ? format_real(*fit->delta) : std::string("null"));
        out += std::string(", \"degenerate\": ") + (fit->degenerate ? "true" : "false");
    }
    return out + "}";
}

std::string to_csv(const ScanRecord& r) {
    std::string w = witnesses_json(r);
    std::string out(to_string(r.kind));
    out += ',' + std::to_string(r.n) + ',' + std::to_string(r.lower) + ',' + std::to_string(r.upper) + ',' +
           std::to_string(r.target) + ",\"" + w + "\",";
    out += to_string(r.status);
    return out;
}

std::string to_json(const TrendRow& row) {
    return "{\"x\": " + std::to_string(row.x) + ", \"mertens_sum\": " + format_real(row.mertens_sum) +
           ", \"logx_loglogx\": " + format_real(row.logx_loglogx) + ", \"ratio\": " + format_real(row.ratio) + "}";
}

std::string to_csv(const TrendRow& row) {
    return std::to_string(row.x) + ',' + format_real(row.mertens_sum) + ',' + format_real(row.logx_loglogx) + ',' +
           format_real(row.ratio);
}

std::string to_json(const UpsilonSums& s, const UpsilonSummary* summary, bool agree) {
    std::string out = "{\"x\": " + std::to_string(s.x);
    out += ", \"sum_direct\": " + format_real(s.sum_direct);
    out += ", \"sum_lemma\": " + format_real(s.sum_lemma);
    out += ", \"sum_logsemiprime\": " + format_real(s.sum_logsemiprime);
    out += ", \"mertens_sum\": " + (summary ? format_real(summary->mertens_sum) : std::string("null"));
    out += ", \"ratio\": " + (summary ? format_real(summary->ratio) : std::string("null"));
    out += ", \"max_rel_spread\": " + format_real(s.max_relative_spread());
    out += std::string(", \"agree\": ") + (agree ? "true" : "false") + "}";
    return out;
}

std::string to_csv(const UpsilonSums& s, const UpsilonSummary* summary, bool agree) {
    std::string out = std::to_string(s.x) + ',' + format_real(s.sum_direct) + ',' + format_real(s.sum_lemma) + ',' +
                      format_real(s.sum_logsemiprime) + ',';
    out += (summary ? format_real(summary->mertens_sum) : std::string()) + ',';
    out += (summary ? format_real(summary->ratio) : std::string()) + ',';
    out += agree ? "true" : "false";
    return out;
}

}  // namespace psum
