#pragma once

#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "logcleanse/errors.hpp"

namespace logcleanse {

/// One variable-term class: a regular expression applied at a fixed rank,
/// rewriting matched variables to a canonical `#NAME#` placeholder.
///
/// `var_group` selects the capture group whose span is the variable text;
/// 0 means the whole match. Patterns with structural context (the `(for )`
/// prefix of User, the delimiters around Size) keep that context intact and
/// replace only the variable group.
struct VariableClass {
    std::string name;
    std::string pattern;
    int rank = 0;
    std::string placeholder;
    int var_group = 0;
    // Lowercase substrings that must all occur in a message for the regex to
    // possibly match; empty means always try. A pure fast-path, validated by
    // tests against ungated detection.
    std::vector<std::string> hints;
    bool needs_digit = false;
    std::regex compiled;
};

/// A matched variable term. `begin`/`end` delimit the variable span inside
/// the message; `match_begin`/`match_end` the full regex match including any
/// structural context. Spans of distinct detections never overlap.
struct DetectedVariable {
    std::string class_name;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string original;
    std::string placeholder;
    std::size_t match_begin = 0;
    std::size_t match_end = 0;
};

/// The fifteen built-in machine-independent classes, in application order.
const std::vector<VariableClass>& builtin_classes();

/// Parses a pattern table: tab-separated `rank<TAB>name<TAB>placeholder<TAB>regex`
/// with an optional fifth `var_group` column; `#` lines are comments. Rows are
/// merged with the built-in set unless `include_defaults` is false, and the
/// result is sorted by rank. Throws PatternCompileError (row identified) or
/// DuplicateRank.
std::vector<VariableClass> load_patterns(std::string_view source, bool include_defaults = true);
std::vector<VariableClass> load_patterns_file(const std::string& path, bool include_defaults = true);

/// Applies the classes in rank order over a lowercased shadow of the message.
/// Characters consumed by an earlier class's match are masked from later
/// classes; within one class, matches are found left-to-right, non-overlapping.
/// The result is sorted by span start.
std::vector<DetectedVariable> detect(std::string_view message, const std::vector<VariableClass>& classes);

/// Replaces each selected detection's span with its placeholder (right-to-left,
/// so earlier spans stay valid). When `only` is given, detections of other
/// classes are left untouched. Throws SpanMismatch when a detection's original
/// no longer matches the message.
std::string constantify(std::string_view message,
                        const std::vector<DetectedVariable>& detections,
                        const std::optional<std::set<std::string>>& only = std::nullopt);

}  // namespace logcleanse
