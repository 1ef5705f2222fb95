#include "logcleanse/corpus_stats.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace logcleanse {

namespace {

std::size_t digits(std::int64_t v) {
    std::size_t n = v < 0 ? 1 : 0;
    std::uint64_t u = v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
    do {
        ++n;
        u /= 10;
    } while (u != 0);
    return n;
}

}  // namespace

double CorpusReport::reduction_pct() const {
    if (bytes_in == 0) return 0.0;
    return 100.0 * (1.0 - static_cast<double>(bytes_out) / static_cast<double>(bytes_in));
}

double CorpusReport::encoded_fraction() const {
    return total_entries == 0 ? 0.0
                              : static_cast<double>(encoded_entries) / static_cast<double>(total_entries);
}

double CorpusReport::kept_semantic_fraction() const {
    return total_entries == 0
               ? 0.0
               : static_cast<double>(kept_semantic_entries) / static_cast<double>(total_entries);
}

double CorpusReport::sensitive_term_fraction() const {
    return total_terms == 0 ? 0.0
                            : static_cast<double>(sensitive_terms) / static_cast<double>(total_terms);
}

double CorpusReport::mean_terms_per_entry_in() const {
    const std::uint64_t n = total_entries - error_entries;
    return n == 0 ? 0.0 : static_cast<double>(total_terms) / static_cast<double>(n);
}

double CorpusReport::mean_terms_per_entry_out() const {
    const std::uint64_t n = total_entries - error_entries;
    return n == 0 ? 0.0 : static_cast<double>(out_terms) / static_cast<double>(n);
}

void accumulate(CorpusReport& report, const ProcessedEntry& processed) {
    ++report.total_entries;
    const std::size_t ts_overhead = digits(processed.entry.timestamp) + 1;
    report.bytes_in += ts_overhead + processed.entry.raw_length + 1;
    report.bytes_out += ts_overhead + processed.final_text.size() + 1;
    if (processed.error) {
        ++report.error_entries;
        return;
    }
    report.total_terms += processed.raw_term_count;
    report.sensitive_terms += processed.raw_sensitive_count;
    report.out_terms += processed.out_term_count;
    if (processed.state == EntryState::encoded)
        ++report.encoded_entries;
    else
        ++report.kept_semantic_entries;
}

void merge(CorpusReport& into, const CorpusReport& from) {
    into.total_entries += from.total_entries;
    into.error_entries += from.error_entries;
    into.total_terms += from.total_terms;
    into.sensitive_terms += from.sensitive_terms;
    into.out_terms += from.out_terms;
    into.bytes_in += from.bytes_in;
    into.bytes_out += from.bytes_out;
    into.encoded_entries += from.encoded_entries;
    into.kept_semantic_entries += from.kept_semantic_entries;
}

PatternCensus census(const ReferenceTable& table) {
    PatternCensus out;
    const auto rows = table.rows();  // already (count desc, key asc)
    out.unique_patterns = rows.size();
    std::uint64_t total = 0;
    for (const auto& row : rows) total += row.count;
    std::uint64_t running = 0;
    out.coverage_curve.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        running += rows[i].count;
        out.coverage_curve.emplace_back(i + 1,
                                        total == 0 ? 0.0
                                                   : static_cast<double>(running) /
                                                         static_cast<double>(total));
    }
    return out;
}

double frequent_pattern_coverage(const ReferenceTable& table, std::size_t k) {
    if (k == 0) return 0.0;
    const auto curve = census(table).coverage_curve;
    if (curve.empty()) return 0.0;
    return curve[std::min(k, curve.size()) - 1].second;
}

std::string report_json(const CorpusReport& report, const PatternCensus* patterns) {
    nlohmann::json doc{
        {"total_entries", report.total_entries},
        {"error_entries", report.error_entries},
        {"total_terms", report.total_terms},
        {"sensitive_terms", report.sensitive_terms},
        {"sensitive_term_fraction", report.sensitive_term_fraction()},
        {"bytes_in", report.bytes_in},
        {"bytes_out", report.bytes_out},
        {"reduction_pct", report.reduction_pct()},
        {"encoded_entries", report.encoded_entries},
        {"encoded_fraction", report.encoded_fraction()},
        {"kept_semantic_entries", report.kept_semantic_entries},
        {"kept_semantic_fraction", report.kept_semantic_fraction()},
        {"mean_terms_per_entry_in", report.mean_terms_per_entry_in()},
        {"mean_terms_per_entry_out", report.mean_terms_per_entry_out()},
    };
    if (patterns) {
        doc["unique_patterns"] = patterns->unique_patterns;
        nlohmann::json curve = nlohmann::json::array();
        for (const auto& [rank, fraction] : patterns->coverage_curve)
            curve.push_back({{"rank", rank}, {"cumulative_fraction", fraction}});
        doc["coverage_curve"] = std::move(curve);
    }
    return doc.dump(2);
}

std::string report_text(const CorpusReport& report, const PatternCensus* patterns) {
    std::ostringstream out;
    out << "entries:          " << report.total_entries << " (" << report.error_entries
        << " malformed)\n";
    out << "terms:            " << report.total_terms << " in, " << report.out_terms << " out\n";
    out << "sensitive terms:  " << report.sensitive_terms << " ("
        << 100.0 * report.sensitive_term_fraction() << "%)\n";
    out << "bytes:            " << report.bytes_in << " in, " << report.bytes_out << " out ("
        << report.reduction_pct() << "% reduction)\n";
    out << "encoded:          " << report.encoded_entries << " entries ("
        << 100.0 * report.encoded_fraction() << "%), kept textual " << report.kept_semantic_entries
        << "\n";
    if (patterns) {
        out << "unique patterns:  " << patterns->unique_patterns << "\n";
        if (!patterns->coverage_curve.empty()) {
            const std::size_t k = std::min<std::size_t>(40, patterns->coverage_curve.size());
            out << "top-" << k << " coverage:  "
                << 100.0 * patterns->coverage_curve[k - 1].second << "%\n";
        }
    }
    return out.str();
}

CompletenessMatrix load_manifest(std::istream& in) {
    std::set<std::string> node_set, day_set;
    std::vector<std::string> node_order;
    std::set<std::pair<std::string, std::string>> cells;
    bool pinned_nodes = false, pinned_days = false;

    auto split_list = [](std::string_view list, auto&& each) {
        std::size_t start = 0;
        while (start <= list.size()) {
            std::size_t comma = list.find(',', start);
            if (comma == std::string_view::npos) comma = list.size();
            if (comma > start) each(std::string(list.substr(start, comma - start)));
            start = comma + 1;
        }
    };

    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("!nodes ", 0) == 0) {
            pinned_nodes = true;
            split_list(std::string_view(line).substr(7), [&](std::string n) {
                if (node_set.insert(n).second) node_order.push_back(std::move(n));
            });
            continue;
        }
        if (line.rfind("!days ", 0) == 0) {
            pinned_days = true;
            split_list(std::string_view(line).substr(6), [&](std::string d) { day_set.insert(std::move(d)); });
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw Error("manifest row needs node<TAB>date: " + line);
        std::string node = line.substr(0, tab);
        std::string day = line.substr(tab + 1);
        if (!pinned_nodes && node_set.insert(node).second) node_order.push_back(node);
        if (!pinned_days) day_set.insert(day);
        cells.emplace(std::move(node), std::move(day));
    }

    CompletenessMatrix matrix;
    matrix.nodes = std::move(node_order);
    matrix.days.assign(day_set.begin(), day_set.end());
    matrix.present.assign(matrix.nodes.size() * matrix.days.size(), 0);
    std::map<std::string, std::size_t> day_index;
    for (std::size_t i = 0; i < matrix.days.size(); ++i) day_index[matrix.days[i]] = i;
    std::map<std::string, std::size_t> node_index;
    for (std::size_t i = 0; i < matrix.nodes.size(); ++i) node_index[matrix.nodes[i]] = i;
    for (const auto& [node, day] : cells) {
        auto ni = node_index.find(node);
        auto di = day_index.find(day);
        if (ni == node_index.end() || di == day_index.end()) continue;  // outside pinned universe
        matrix.present[ni->second * matrix.days.size() + di->second] = 1;
    }
    return matrix;
}

CompletenessMatrix load_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open manifest: " + path);
    return load_manifest(in);
}

double completeness(const CompletenessMatrix& matrix) {
    if (matrix.nodes.empty() || matrix.days.empty())
        throw EmptyMatrix("completeness of an empty matrix");
    std::uint64_t present = 0;
    for (auto cell : matrix.present) present += cell;
    return static_cast<double>(present) / static_cast<double>(matrix.present.size());
}

std::vector<GapRun> gap_runs(const CompletenessMatrix& matrix) {
    std::vector<GapRun> runs;
    for (std::size_t n = 0; n < matrix.nodes.size(); ++n) {
        std::size_t d = 0;
        while (d < matrix.days.size()) {
            if (matrix.cell(n, d)) {
                ++d;
                continue;
            }
            std::size_t start = d;
            while (d < matrix.days.size() && !matrix.cell(n, d)) ++d;
            runs.push_back({matrix.nodes[n], matrix.days[start], matrix.days[d - 1]});
        }
    }
    return runs;
}

std::string gaps_csv(const std::vector<GapRun>& runs) {
    std::string out = "node,start_date,end_date\n";
    for (const auto& run : runs)
        out += run.node + "," + run.start_day + "," + run.end_day + "\n";
    return out;
}

}  // namespace logcleanse
