#pragma once

#include <iosfwd>
#include <string>

#include "logcleanse/anonymizer.hpp"
#include "logcleanse/corpus_stats.hpp"

namespace logcleanse {

struct PipelineConfig {
    unsigned workers = 1;
    unsigned hash_bits = 32;
    bool lenient = false;
    bool encode = true;     // false = anonymize-only, no hashing
    bool emit_lines = true; // false = stats-only run
};

struct PipelineResult {
    CorpusReport report;
    std::uint64_t lines = 0;
};

/// Reads `<timestamp> <message>` lines from `in`, processes them with
/// `config.workers` workers, and writes one `<timestamp> <final_text>` line
/// per input line to `out`, in input order regardless of worker count.
/// `table` may be null when `config.encode` is false.
PipelineResult run_pipeline(std::istream& in, std::ostream& out,
                            const std::vector<VariableClass>& classes, const PolicyTable& policy,
                            ReferenceTable* table, const PipelineConfig& config);

}  // namespace logcleanse
