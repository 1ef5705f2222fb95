#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "logcleanse/anonymizer.hpp"
#include "logcleanse/pattern_codec.hpp"

namespace logcleanse {

/// Corpus-level counters, merged associatively across workers. Byte counts
/// cover the emitted line form `<timestamp> <text>\n`. Per-entry growth is
/// possible (a placeholder can be longer than the variable it replaces), so
/// reductions may come out negative and are reported as such.
struct CorpusReport {
    std::uint64_t total_entries = 0;
    std::uint64_t error_entries = 0;
    std::uint64_t total_terms = 0;
    std::uint64_t sensitive_terms = 0;
    std::uint64_t out_terms = 0;
    std::uint64_t bytes_in = 0;
    std::uint64_t bytes_out = 0;
    std::uint64_t encoded_entries = 0;
    std::uint64_t kept_semantic_entries = 0;  // textual after decide

    double reduction_pct() const;
    double encoded_fraction() const;
    double kept_semantic_fraction() const;
    double sensitive_term_fraction() const;
    double mean_terms_per_entry_in() const;
    double mean_terms_per_entry_out() const;
};

void accumulate(CorpusReport& report, const ProcessedEntry& processed);
void merge(CorpusReport& into, const CorpusReport& from);

/// Event-pattern census of a finished run.
struct PatternCensus {
    std::size_t unique_patterns = 0;
    // (pattern rank, cumulative fraction of encoded entries), rank 1-based,
    // rows ordered by descending frequency with key ties lexicographic.
    std::vector<std::pair<std::size_t, double>> coverage_curve;
};

PatternCensus census(const ReferenceTable& table);

/// Fraction of total frequency held by the top-k rows by frequency,
/// ties broken by key lexicographic order.
double frequent_pattern_coverage(const ReferenceTable& table, std::size_t k);

std::string report_json(const CorpusReport& report, const PatternCensus* patterns = nullptr);
std::string report_text(const CorpusReport& report, const PatternCensus* patterns = nullptr);

/// Collection-completeness grid: presence of a log file per (node, day).
struct CompletenessMatrix {
    std::vector<std::string> nodes;
    std::vector<std::string> days;  // sorted ISO dates
    std::vector<std::uint8_t> present;  // nodes-major grid

    bool cell(std::size_t node, std::size_t day) const {
        return present[node * days.size() + day] != 0;
    }
};

/// Manifest lines are `node<TAB>date` marking a present cell; optional
/// `!nodes a,b,...` and `!days d1,d2,...` directives pin the grid universe,
/// which otherwise spans the distinct nodes and dates seen. `#` comments.
CompletenessMatrix load_manifest(std::istream& in);
CompletenessMatrix load_manifest_file(const std::string& path);

/// Present fraction of the grid. Throws EmptyMatrix.
double completeness(const CompletenessMatrix& matrix);

struct GapRun {
    std::string node;
    std::string start_day;
    std::string end_day;
};

/// Runs of consecutive missing days per node, for gap reporting.
std::vector<GapRun> gap_runs(const CompletenessMatrix& matrix);

std::string gaps_csv(const std::vector<GapRun>& runs);

}  // namespace logcleanse
