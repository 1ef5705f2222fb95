#include "logcleanse/anonymizer.hpp"

#include <algorithm>
#include <set>

namespace logcleanse {

namespace {

std::vector<DetectedVariable> all_detections(const std::string& message,
                                             const std::vector<Term>& terms,
                                             const std::vector<VariableClass>& classes,
                                             const PolicyTable& policy) {
    std::vector<DetectedVariable> detections = detect(message, classes);
    auto from_lexicon = lexicon_detections(terms, policy, detections);
    detections.insert(detections.end(), from_lexicon.begin(), from_lexicon.end());
    std::sort(detections.begin(), detections.end(),
              [](const DetectedVariable& a, const DetectedVariable& b) { return a.begin < b.begin; });
    return detections;
}

bool detection_sensitive(const DetectedVariable& det, const PolicyTable& policy) {
    const SensitivityRule* rule = detection_rule(det, policy);
    return rule && rule->sensitive;
}

// A detection is meaningful when any term it overlaps carries semantic.
bool detection_meaningful(const DetectedVariable& det, const std::vector<Term>& classified) {
    for (const auto& term : classified) {
        if (det.end <= term.begin || det.begin >= term.end) continue;
        if (term.semantic) return true;
    }
    return false;
}

std::string apply_replacements(const std::string& message,
                               std::vector<const DetectedVariable*> selected) {
    std::sort(selected.begin(), selected.end(),
              [](const DetectedVariable* a, const DetectedVariable* b) { return a->begin > b->begin; });
    std::string out = message;
    for (const auto* d : selected) out.replace(d->begin, d->end - d->begin, d->placeholder);
    return out;
}

bool looks_like_hash_key(const std::string& text) {
    if (text.size() < 4 || text.size() % 2 != 0) return false;
    for (char c : text)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    return true;
}

}  // namespace

QualityScore score_text(const std::string& text, const std::vector<VariableClass>& classes,
                        const PolicyTable& policy, EntryState state, std::size_t raw_length,
                        std::size_t encoded_chars) {
    const int useful = policy.useful_for(state) ? 1 : 0;
    if (state == EntryState::encoded) {
        // A hash-key is a single nonsensitive term carrying the pattern's
        // semantic, so N = S = 1 by construction.
        const double r = reduction(state, raw_length, encoded_chars);
        return score(useful, 1.0, 1.0, r, policy.coefficients);
    }
    auto terms = tokenize(text);
    auto detections = all_detections(text, terms, classes, policy);
    terms = classify_terms(std::move(terms), detections, policy);
    return score(useful, nonsensitivity(terms), semantic_fraction(terms),
                 reduction(state, raw_length, text.size()), policy.coefficients);
}

ProcessedEntry anonymize(const LogEntry& entry, const std::vector<VariableClass>& classes,
                         const PolicyTable& policy) {
    ProcessedEntry out;
    out.entry = entry;

    const std::string& message = entry.message;
    auto terms = tokenize(message);
    auto detections = all_detections(message, terms, classes, policy);
    auto classified = classify_terms(terms, detections, policy);

    out.raw_term_count = classified.size();
    out.raw_sensitive_count = static_cast<std::size_t>(
        std::count_if(classified.begin(), classified.end(), [](const Term& t) { return t.sensitive; }));

    out.ladder.push_back(
        {"raw", message, score_text(message, classes, policy, EntryState::raw, entry.raw_length)});

    // Step 2: eliminate sensitive detections, highest severity first.
    const auto ordered = anonymization_order(detections, policy);
    std::vector<const DetectedVariable*> replaced;
    int stage_no = 0;
    for (const auto& det : ordered) {
        if (!detection_sensitive(det, policy)) continue;
        replaced.push_back(&det);
        std::string text = apply_replacements(message, replaced);
        out.ladder.push_back({"anon#" + std::to_string(++stage_no), text,
                              score_text(text, classes, policy, EntryState::anonymized,
                                         entry.raw_length)});
    }

    // Step 3: constantify semantic-less detections in one round.
    bool constantified = false;
    for (const auto& det : detections) {
        if (detection_sensitive(det, policy)) continue;
        if (detection_meaningful(det, classified)) continue;
        replaced.push_back(&det);
        constantified = true;
    }
    std::string text = apply_replacements(message, replaced);
    if (constantified)
        out.ladder.push_back({"anon#" + std::to_string(++stage_no), text,
                              score_text(text, classes, policy, EntryState::anonymized,
                                         entry.raw_length)});

    out.state = EntryState::anonymized;
    out.final_text = std::move(text);
    out.quality = out.ladder.back().label == "raw"
                      ? score_text(out.final_text, classes, policy, EntryState::anonymized,
                                   entry.raw_length)
                      : out.ladder.back().quality;
    return out;
}

std::string event_pattern_text(const std::string& anonymized_text,
                               const std::vector<VariableClass>& classes,
                               const PolicyTable& policy) {
    auto terms = tokenize(anonymized_text);
    auto detections = all_detections(anonymized_text, terms, classes, policy);
    std::string constant = constantify(anonymized_text, detections);

    // Step 6: fold semantic terms below the entry's top severity into their
    // glob placeholders; the strongest semantic survives as the carrier.
    auto folded_terms = tokenize(constant);
    struct Fold {
        std::size_t begin, end;
        std::string placeholder;
        int severity;
    };
    std::vector<Fold> candidates;
    int top = -1;
    for (const auto& term : folded_terms) {
        if (is_placeholder_token(term.text)) continue;
        const SemanticRule* rule = policy.semantic_match(term.text);
        if (!rule) continue;
        candidates.push_back({term.begin, term.end, glob_placeholder(rule->glob), rule->severity});
        top = std::max(top, rule->severity);
    }
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it)
        if (it->severity < top)
            constant.replace(it->begin, it->end - it->begin, it->placeholder);
    return constant;
}

ProcessedEntry decide(ProcessedEntry processed, ReferenceTable& table, const PolicyTable& policy,
                      const std::vector<VariableClass>& classes, unsigned hash_bits) {
    if (processed.error || processed.state != EntryState::anonymized) return processed;

    const std::string& text = processed.final_text;
    const std::size_t raw_length = processed.entry.raw_length;

    // A single term that is an already-published hash-key passes through;
    // re-encoding it would derange the reference table round-trip.
    auto terms = tokenize(text);
    if (terms.size() == 1 && looks_like_hash_key(text)) {
        if (auto row = table.touch_key(text)) {
            processed.state = EntryState::encoded;
            processed.pattern = row->pattern;
            processed.key = text;
            processed.quality =
                score_text(text, classes, policy, EntryState::encoded, raw_length, text.size());
            processed.ladder.push_back({"encoded", text, processed.quality});
            processed.final_text = text;
            processed.out_term_count = 1;
            return processed;
        }
    }

    const auto remaining = all_detections(text, terms, classes, policy);
    const QualityScore q_keep = processed.quality;
    const QualityScore q_encode_estimate = score_text(
        text, classes, policy, EntryState::encoded, raw_length, hash_bits / 4);

    const bool variable_free = remaining.empty();
    const bool encode_wins = q_encode_estimate.q >= q_keep.q;  // ties favor encoding
    if (!variable_free && !encode_wins) {
        processed.out_term_count = tokenize(processed.final_text).size();
        return processed;  // keep the anonymized text
    }

    std::string pattern_text = event_pattern_text(text, classes, policy);
    if (pattern_text != text) {
        int next = 0;
        for (const auto& stage : processed.ladder)
            if (stage.label != "raw") ++next;
        processed.ladder.push_back({"anon#" + std::to_string(next + 1), pattern_text,
                                    score_text(pattern_text, classes, policy,
                                               EntryState::anonymized, raw_length)});
    }

    EventPattern pattern{pattern_text, tokenize(pattern_text).size()};
    HashKey key = table.get_or_insert(pattern, {});
    processed.state = EntryState::encoded;
    processed.pattern = pattern_text;
    processed.key = key.hex;
    processed.final_text = key.hex;
    processed.quality =
        score_text(key.hex, classes, policy, EntryState::encoded, raw_length, key.hex.size());
    processed.ladder.push_back({"encoded", key.hex, processed.quality});
    processed.out_term_count = 1;
    return processed;
}

ProcessedEntry process_line(const std::string& line, const std::vector<VariableClass>& classes,
                            const PolicyTable& policy, ReferenceTable* table, unsigned hash_bits,
                            bool lenient, bool encode) {
    LogEntry entry;
    try {
        entry = parse_line(line);
    } catch (const MalformedEntry& e) {
        if (!lenient) {
            ProcessedEntry err;
            err.entry.timestamp = 0;
            err.entry.raw_length = line.size();
            err.state = EntryState::raw;
            err.final_text = kMalformedText;
            err.error = e.what();
            return err;
        }
        entry.timestamp = 0;
        entry.message = line;
        while (!entry.message.empty() &&
               (entry.message.back() == '\n' || entry.message.back() == '\r'))
            entry.message.pop_back();
        entry.raw_length = entry.message.size();
        if (entry.message.empty()) {
            ProcessedEntry err;
            err.entry.timestamp = 0;
            err.state = EntryState::raw;
            err.final_text = kMalformedText;
            err.error = "empty line";
            return err;
        }
    }

    try {
        ProcessedEntry processed = anonymize(entry, classes, policy);
        if (encode && table)
            processed = decide(std::move(processed), *table, policy, classes, hash_bits);
        if (processed.out_term_count == 0)
            processed.out_term_count = tokenize(processed.final_text).size();
        return processed;
    } catch (const Error& e) {
        ProcessedEntry err;
        err.entry.timestamp = entry.timestamp;
        err.entry.raw_length = entry.raw_length;
        err.state = EntryState::raw;
        err.final_text = kMalformedText;
        err.error = e.what();
        return err;
    }
}

std::vector<ProcessedEntry> process_stream(const std::vector<std::string>& lines,
                                           const std::vector<VariableClass>& classes,
                                           const PolicyTable& policy, ReferenceTable& table,
                                           unsigned hash_bits, bool lenient) {
    std::vector<ProcessedEntry> out;
    out.reserve(lines.size());
    std::uint64_t seq = 0;
    for (const auto& line : lines) {
        ProcessedEntry p = process_line(line, classes, policy, &table, hash_bits, lenient, true);
        p.sequence = seq++;
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace logcleanse
