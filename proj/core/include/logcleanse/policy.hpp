#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logcleanse/entry.hpp"
#include "logcleanse/variable_detector.hpp"

namespace logcleanse {

enum class EntryState { raw, anonymized, encoded };

/// A sensitivity classification row. The subject is either a detection-class
/// subject ("User Name", "IP Address") or a literal term class bound through
/// the lexicon ("Node Name"). Severity 0 exactly when not sensitive.
struct SensitivityRule {
    std::string subject;
    bool sensitive = false;
    int severity = 0;
};

/// A semantic classification row. `x*` matches a prefix, `*x` a suffix,
/// `*x*` a substring, and a bare glob the whole term; case-insensitive.
struct SemanticRule {
    std::string glob;
    bool semantic = true;
    int severity = 0;
};

struct Coefficients {
    double n = 1.0;
    double s = 1.0;
    double r = 1.0;
};

struct PolicyTable {
    std::vector<SensitivityRule> sensitivity_rules;
    std::vector<SemanticRule> semantic_rules;
    // lowercased literal term -> subject name
    std::map<std::string, std::string> lexicon;
    Coefficients coefficients;
    bool usefulness_default = true;
    // Per-state usefulness overrides; unset states fall back to the default.
    std::optional<bool> usefulness_raw;
    std::optional<bool> usefulness_anonymized;
    std::optional<bool> usefulness_encoded;

    bool useful_for(EntryState state) const;
    const SensitivityRule* rule_for_class(std::string_view class_name) const;
    const SensitivityRule* rule_for_subject(std::string_view subject) const;
    /// Highest-severity matching semantic=Y rule, or nullptr.
    const SemanticRule* semantic_match(std::string_view term) const;
};

/// Parses the sectioned tab-separated policy format:
///   [sensitivity]  subject<TAB>Y|N<TAB>severity
///   [semantic]     glob<TAB>Y|N<TAB>severity
///   [coefficients] n<TAB>s<TAB>r
///   [lexicon]      literal<TAB>subject
///   [usefulness]   default|raw|anonymized|encoded<TAB>Y|N
/// Throws PolicyParseError (line identified) or SeverityOutOfRange.
PolicyTable load_policy(std::string_view source);

/// Accepts a preset name (`paper-table2`, `tud-table5`) or a file path.
PolicyTable load_policy_path_or_preset(const std::string& name);

PolicyTable preset_paper_table2();
PolicyTable preset_tud_table5();

/// Case-insensitive glob match per the SemanticRule conventions.
bool glob_match(std::string_view glob, std::string_view term);

/// Canonical placeholder for a semantic glob: `*key*` -> `#KEY#`.
std::string glob_placeholder(std::string_view glob);

/// Canonical placeholder for a lexicon subject: `Public Key` -> `#PUBLICKEY#`.
std::string subject_placeholder(std::string_view subject);

/// Sets each term's flags: sensitive when a covering detection's class (or a
/// lexicon-bound literal) has a sensitive=Y rule; semantic per the 3-source
/// rule (sensitive terms are semantic, otherwise the semantic table decides);
/// placeholder tokens get all flags false.
std::vector<Term> classify_terms(std::vector<Term> terms,
                                 const std::vector<DetectedVariable>& detections,
                                 const PolicyTable& policy);

/// Detections for terms bound by the policy lexicon, skipping any term that
/// overlaps an existing detection span.
std::vector<DetectedVariable> lexicon_detections(const std::vector<Term>& terms,
                                                 const PolicyTable& policy,
                                                 const std::vector<DetectedVariable>& existing);

/// Sensitivity rule governing a detection, or nullptr when the policy has none.
const SensitivityRule* detection_rule(const DetectedVariable& detection, const PolicyTable& policy);

/// Sorts detections by descending severity of their sensitivity rule,
/// ties broken by span start ascending.
std::vector<DetectedVariable> anonymization_order(std::vector<DetectedVariable> detections,
                                                  const PolicyTable& policy);

}  // namespace logcleanse
