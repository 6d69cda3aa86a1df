#pragma once

#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "chronos/types.hpp"

namespace chronos {

enum class ExprKind { explicit_date, relative, ambiguous, anchored_relative };

std::string to_string(ExprKind k);

/// A classified natural-language temporal expression. kind=explicit_date means
/// the raw text carries a parseable absolute date; kind=anchored_relative
/// requires an anchor range ("the week after <anchor>").
struct TemporalExpression {
    std::string raw;
    ExprKind kind = ExprKind::explicit_date;
    std::optional<DatetimeRange> anchor;

    // match bookkeeping used by resolve()
    int pattern_index = -1;
    std::string matched;
    std::vector<std::string> captures;
};

/// Deterministic normalization of temporal expressions into DatetimeRange
/// values relative to a reference timestamp. Classification runs a fixed
/// pattern table with a longest-match rule; the table ships as a data file
/// so the policies are auditable without code changes.
///
/// Ambiguity policy: "recently" = trailing 30 days ending at ref;
/// "a while ago" = [ref-180d, ref-30d]; "soon" = [ref, ref+14d];
/// "these days" = [ref-14d, ref+1d]. "last month" is the previous calendar
/// month, "last week" the previous ISO week (Mon-Sun), "last <weekday>" the
/// most recent strictly-prior such weekday. Day-granularity endpoints are
/// 00:00:00 / 23:59:59 inclusive.
class TemporalResolver {
public:
    /// The compiled-in default table (identical to data/temporal_patterns.json).
    static const TemporalResolver& built_in();
    static TemporalResolver from_file(const std::string& path);
    static TemporalResolver from_json(const json& table);

    /// Longest-match classification. Returns nullopt for unrecognized text,
    /// or for an anchored form without a supplied anchor; callers fall back
    /// to the whole-conversation-day range.
    std::optional<TemporalExpression> classify(
        const std::string& raw, std::optional<DatetimeRange> anchor = std::nullopt) const;

    /// Total over classified expressions; always returns start <= end.
    DatetimeRange resolve(const TemporalExpression& expr, UtcTime ref) const;

    /// The weakest true range for unrecognized expressions: the full
    /// conversation day of ref.
    static DatetimeRange fallback_day(UtcTime ref) {
        return DatetimeRange::whole_day(date_of(ref));
    }

    const json& table() const { return table_; }

    /// Classify-then-resolve convenience; falls back to the conversation day.
    DatetimeRange resolve_or_fallback(const std::string& raw, UtcTime ref,
                                      std::optional<DatetimeRange> anchor = std::nullopt) const;

private:
    struct Pattern {
        std::string id;
        ExprKind kind;
        std::string rule;
        std::string unit;
        int offset_days = 0;
        int start_days = 0;
        int end_days = 0;
        std::regex re;
    };

    std::vector<Pattern> patterns_;
    json table_;
};

}  // namespace chronos
