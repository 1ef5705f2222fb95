#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logcleanse/errors.hpp"

namespace logcleanse {

/// One parsed syslog record. `raw_length` is the byte count of the message
/// as first parsed and never changes afterwards.
struct LogEntry {
    std::int64_t timestamp = 0;  // seconds since Unix epoch
    std::string message;
    std::optional<std::string> origin;
    std::size_t raw_length = 0;
};

/// A whitespace-delimited token of a message, carrying the sensitivity and
/// semantic flags assigned by classification. `begin`/`end` are byte offsets
/// into the message the term was tokenized from.
struct Term {
    std::string text;
    std::size_t index = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
    bool sensitive = false;
    bool semantic = false;
    bool is_placeholder = false;
};

/// True for canonical placeholder tokens of the form `#NAME#`.
bool is_placeholder_token(std::string_view text);

/// Parses `<timestamp> <message>`. The timestamp is either an integer epoch
/// value or an ISO `YYYY-MM-DDThh:mm:ss` datetime (normalized to epoch
/// seconds, UTC). The message is byte-identical to the input after the
/// timestamp and one separator. Throws MalformedEntry when no recognizable
/// timestamp prefix exists or the message is empty.
LogEntry parse_line(std::string_view line);

/// Splits a message into its maximal non-whitespace runs, in order.
/// All flags start out false. Throws EmptyEntry for an all-whitespace input.
std::vector<Term> tokenize(std::string_view message);

}  // namespace logcleanse
