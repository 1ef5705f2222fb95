#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logcleanse/entry.hpp"
#include "logcleanse/pattern_codec.hpp"
#include "logcleanse/policy.hpp"
#include "logcleanse/quality.hpp"
#include "logcleanse/variable_detector.hpp"

namespace logcleanse {

/// One step of an entry's anonymization trace, with the text and its quality
/// after the step.
struct Stage {
    std::string label;
    std::string text;
    QualityScore quality;
};

struct ProcessedEntry {
    LogEntry entry;
    EntryState state = EntryState::raw;
    std::string final_text;
    QualityScore quality;
    std::optional<std::string> pattern;
    std::optional<std::string> key;
    std::vector<Stage> ladder;
    std::optional<std::string> error;
    std::uint64_t sequence = 0;
    // Counters carried along for corpus statistics.
    std::size_t raw_term_count = 0;
    std::size_t raw_sensitive_count = 0;
    std::size_t out_term_count = 0;
};

/// Quality of `text` in the given state: terms are tokenized, detected and
/// classified under the policy; R follows the state. For the encoded state
/// the single hash-key term scores N = S = 1 and R measures the shrinkage
/// from `raw_length` to `encoded_chars`.
QualityScore score_text(const std::string& text, const std::vector<VariableClass>& classes,
                        const PolicyTable& policy, EntryState state, std::size_t raw_length,
                        std::size_t encoded_chars = 0);

/// Steps 1-3: detect variable terms, classify them, eliminate sensitive ones
/// (highest severity first) and constantify semantic-less ones. Meaningful
/// non-sensitive detections stay verbatim. The ladder records the raw stage
/// and one stage per replacement round.
ProcessedEntry anonymize(const LogEntry& entry, const std::vector<VariableClass>& classes,
                         const PolicyTable& policy);

/// The canonical event pattern of an anonymized text: remaining variable
/// detections are constantified, then semantic terms below the entry's top
/// semantic severity are folded into their glob placeholders (the quality-
/// driven reduction of step 6).
std::string event_pattern_text(const std::string& anonymized_text,
                               const std::vector<VariableClass>& classes,
                               const PolicyTable& policy);

/// Steps 4-7: choose between keeping the anonymized text (R = 0.75) and
/// encoding its event pattern to a hash-key (N = S = 1). A text with no
/// variable terms remaining is encoded unconditionally; otherwise the larger
/// quality wins, ties favor encoding. Collisions extend the key via the
/// reference table's policy.
ProcessedEntry decide(ProcessedEntry processed, ReferenceTable& table,
                      const PolicyTable& policy, const std::vector<VariableClass>& classes,
                      unsigned hash_bits);

/// One output per input line, order preserved; malformed lines yield error
/// records, not a halt. With `lenient`, a line without a timestamp prefix is
/// processed as a whole message at timestamp 0.
std::vector<ProcessedEntry> process_stream(const std::vector<std::string>& lines,
                                           const std::vector<VariableClass>& classes,
                                           const PolicyTable& policy, ReferenceTable& table,
                                           unsigned hash_bits, bool lenient = false);

/// Processes one line through parse, anonymize and (when `encode`) decide.
ProcessedEntry process_line(const std::string& line, const std::vector<VariableClass>& classes,
                            const PolicyTable& policy, ReferenceTable* table, unsigned hash_bits,
                            bool lenient, bool encode);

/// Replacement text emitted for lines that fail to parse (fail-closed).
inline constexpr const char* kMalformedText = "#MALFORMED#";

}  // namespace logcleanse
