#include "logcleanse/policy.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace logcleanse {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
    return out;
}

// Normalizes a rule subject for matching: lowercase, cut at the first '(',
// collapse runs of whitespace, trim. "User ID (identification of Unix users)"
// becomes "user id".
std::string normalize_subject(std::string_view subject) {
    std::string s = lower(subject);
    if (auto paren = s.find('('); paren != std::string::npos) s.resize(paren);
    std::string out;
    bool pending_space = false;
    for (char c : s) {
        if (c == ' ' || c == '\t') {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

// Detection classes reachable from policy subjects. Subjects without a row
// here bind only through the lexicon.
const std::map<std::string, std::string>& subject_class_bindings() {
    static const std::map<std::string, std::string> m = {
        {"user name", "User"},   {"username", "User"},  {"ip address", "IPv4"},
        {"port number", "Port"}, {"path / url", "Path"}, {"path/url", "Path"},
        {"mail addresses", "Email"}, {"email", "Email"}, {"user id", "URID"},
        {"datetime", "DateTime"},
    };
    return m;
}

std::vector<std::string> split_tabs(std::string_view line) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            cols.emplace_back(line.substr(start));
            break;
        }
        cols.emplace_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return cols;
}

bool parse_yn(const std::string& s, const std::string& where) {
    if (s == "Y" || s == "y") return true;
    if (s == "N" || s == "n") return false;
    throw PolicyParseError(where + ": expected Y or N, got '" + s + "'");
}

int parse_severity(const std::string& s, const std::string& where) {
    int v = 0;
    auto [p, e] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (e != std::errc{} || p != s.data() + s.size())
        throw PolicyParseError(where + ": bad severity '" + s + "'");
    if (v < 0 || v > 10)
        throw SeverityOutOfRange(where + ": severity " + std::to_string(v) + " outside [0,10]");
    return v;
}

constexpr std::string_view kPaperTable2 = R"(# Sample classification policy
[sensitivity]
User Name	Y	10
IP Address	Y	8
Port Number	Y	1
Node Name	Y	3
Node ID	Y	3
Public Key	Y	10
App Name	N	0
Path / URL	N	0
[semantic]
accept*	Y	7
reject*	Y	10
close*	Y	8
*connect*	Y	9
start*	Y	2
*key*	Y	1
session	Y	7
user*	Y	5
[coefficients]
1	1	1
)";

constexpr std::string_view kTudTable5 = R"(# Site privacy policy sample
[sensitivity]
Surname	Y	10
Firstname	Y	10
Title	Y	10
User type (employee, student, guest)	Y	10
User name	Y	10
Password	Y	10
Login status (active, disabled)	Y	10
User ID (identification of Unix users)	Y	10
Home (Path to home directory)	Y	10
Shell (default shell)	Y	10
Group ID (belonging to Unix groups)	Y	10
Mail addresses (TUD addresses)	Y	10
IP Address	Y	8
Port Number	N	0
Node Name	N	0
Node ID	N	0
Public Key	Y	8
App Name	N	0
Path / URL	Y	1
[semantic]
accept*	Y	7
reject*	Y	10
close*	Y	8
*connect*	Y	9
start*	Y	2
*key*	Y	1
session	Y	7
user*	Y	5
[coefficients]
1	1	1
)";

}  // namespace

bool PolicyTable::useful_for(EntryState state) const {
    switch (state) {
        case EntryState::raw:
            return usefulness_raw.value_or(usefulness_default);
        case EntryState::anonymized:
            return usefulness_anonymized.value_or(usefulness_default);
        case EntryState::encoded:
            return usefulness_encoded.value_or(usefulness_default);
    }
    return usefulness_default;
}

const SensitivityRule* PolicyTable::rule_for_class(std::string_view class_name) const {
    const std::string cls_lower = lower(class_name);
    for (const auto& rule : sensitivity_rules) {
        const std::string norm = normalize_subject(rule.subject);
        if (norm == cls_lower) return &rule;
        auto binding = subject_class_bindings().find(norm);
        if (binding != subject_class_bindings().end() && binding->second == class_name) return &rule;
    }
    return nullptr;
}

const SensitivityRule* PolicyTable::rule_for_subject(std::string_view subject) const {
    const std::string norm = normalize_subject(subject);
    for (const auto& rule : sensitivity_rules)
        if (normalize_subject(rule.subject) == norm) return &rule;
    return nullptr;
}

const SemanticRule* PolicyTable::semantic_match(std::string_view term) const {
    const SemanticRule* best = nullptr;
    for (const auto& rule : semantic_rules) {
        if (!rule.semantic) continue;
        if (!glob_match(rule.glob, term)) continue;
        if (!best || rule.severity > best->severity) best = &rule;
    }
    return best;
}

PolicyTable load_policy(std::string_view source) {
    PolicyTable table;
    enum class Section { none, sensitivity, semantic, coefficients, lexicon, usefulness };
    Section section = Section::none;
    bool any_rule = false;

    std::istringstream in{std::string(source)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::string where = "policy line " + std::to_string(line_no);

        if (line.front() == '[') {
            if (line == "[sensitivity]") section = Section::sensitivity;
            else if (line == "[semantic]") section = Section::semantic;
            else if (line == "[coefficients]") section = Section::coefficients;
            else if (line == "[lexicon]") section = Section::lexicon;
            else if (line == "[usefulness]") section = Section::usefulness;
            else throw PolicyParseError(where + ": unknown section " + line);
            continue;
        }

        auto cols = split_tabs(line);
        switch (section) {
            case Section::none:
                throw PolicyParseError(where + ": row outside any section");
            case Section::sensitivity: {
                if (cols.size() != 3)
                    throw PolicyParseError(where + ": expected subject<TAB>Y|N<TAB>severity");
                SensitivityRule rule;
                rule.subject = cols[0];
                rule.sensitive = parse_yn(cols[1], where);
                rule.severity = parse_severity(cols[2], where);
                if (rule.sensitive == (rule.severity == 0))
                    throw PolicyParseError(where + ": severity must be 0 exactly when not sensitive");
                table.sensitivity_rules.push_back(std::move(rule));
                any_rule = true;
                break;
            }
            case Section::semantic: {
                if (cols.size() != 3)
                    throw PolicyParseError(where + ": expected glob<TAB>Y|N<TAB>severity");
                SemanticRule rule;
                rule.glob = cols[0];
                rule.semantic = parse_yn(cols[1], where);
                rule.severity = parse_severity(cols[2], where);
                std::string stripped = rule.glob;
                std::erase(stripped, '*');
                if (stripped.empty())
                    throw PolicyParseError(where + ": glob is empty after stripping '*'");
                table.semantic_rules.push_back(std::move(rule));
                any_rule = true;
                break;
            }
            case Section::coefficients: {
                if (cols.size() != 3)
                    throw PolicyParseError(where + ": expected n<TAB>s<TAB>r");
                std::array<double, 3> vals{};
                for (int i = 0; i < 3; ++i) {
                    try {
                        vals[i] = std::stod(cols[i]);
                    } catch (const std::exception&) {
                        throw PolicyParseError(where + ": bad coefficient '" + cols[i] + "'");
                    }
                    if (vals[i] <= 0.0 || vals[i] > 1.0)
                        throw PolicyParseError(where + ": coefficient must be in (0,1]");
                }
                table.coefficients = {vals[0], vals[1], vals[2]};
                break;
            }
            case Section::lexicon: {
                if (cols.size() != 2)
                    throw PolicyParseError(where + ": expected literal<TAB>subject");
                table.lexicon[lower(cols[0])] = cols[1];
                break;
            }
            case Section::usefulness: {
                if (cols.size() != 2)
                    throw PolicyParseError(where + ": expected state<TAB>Y|N");
                const bool value = parse_yn(cols[1], where);
                if (cols[0] == "default") table.usefulness_default = value;
                else if (cols[0] == "raw") table.usefulness_raw = value;
                else if (cols[0] == "anonymized") table.usefulness_anonymized = value;
                else if (cols[0] == "encoded") table.usefulness_encoded = value;
                else throw PolicyParseError(where + ": unknown state '" + cols[0] + "'");
                break;
            }
        }
    }

    if (!any_rule) throw PolicyParseError("policy defines no sensitivity or semantic rules");
    return table;
}

PolicyTable preset_paper_table2() {
    return load_policy(kPaperTable2);
}

PolicyTable preset_tud_table5() {
    return load_policy(kTudTable5);
}

PolicyTable load_policy_path_or_preset(const std::string& name) {
    if (name == "paper-table2") return preset_paper_table2();
    if (name == "tud-table5") return preset_tud_table5();
    std::ifstream in(name);
    if (!in) throw PolicyParseError("cannot open policy: " + name);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_policy(buf.str());
}

bool glob_match(std::string_view glob, std::string_view term) {
    const std::string g = lower(glob);
    const std::string t = lower(term);
    const bool star_front = !g.empty() && g.front() == '*';
    const bool star_back = g.size() > 1 && g.back() == '*';
    std::string_view body{g};
    if (star_front) body.remove_prefix(1);
    if (star_back) body.remove_suffix(1);
    if (body.empty()) return false;

    if (star_front && star_back) return t.find(body) != std::string::npos;
    if (star_back) return t.size() >= body.size() && t.compare(0, body.size(), body) == 0;
    if (star_front)
        return t.size() >= body.size() && t.compare(t.size() - body.size(), body.size(), body) == 0;
    return t == body;
}

namespace {

std::string alnum_upper_placeholder(std::string_view text) {
    std::string out = "#";
    for (char c : text) {
        if (c >= 'a' && c <= 'z') out.push_back(static_cast<char>(c - ('a' - 'A')));
        else if ((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) out.push_back(c);
    }
    out.push_back('#');
    return out;
}

}  // namespace

std::string glob_placeholder(std::string_view glob) {
    return alnum_upper_placeholder(glob);
}

std::string subject_placeholder(std::string_view subject) {
    return alnum_upper_placeholder(subject);
}

std::vector<Term> classify_terms(std::vector<Term> terms,
                                 const std::vector<DetectedVariable>& detections,
                                 const PolicyTable& policy) {
    for (auto& term : terms) {
        term.is_placeholder = is_placeholder_token(term.text);
        if (term.is_placeholder) {
            term.sensitive = false;
            term.semantic = false;
            continue;
        }

        bool sensitive = false;
        for (const auto& det : detections) {
            if (det.end <= term.begin || det.begin >= term.end) continue;
            const SensitivityRule* rule = detection_rule(det, policy);
            if (rule && rule->sensitive) {
                sensitive = true;
                break;
            }
        }
        if (!sensitive) {
            auto lex = policy.lexicon.find(lower(term.text));
            if (lex != policy.lexicon.end()) {
                const SensitivityRule* rule = policy.rule_for_subject(lex->second);
                if (rule && rule->sensitive) sensitive = true;
            }
        }

        term.sensitive = sensitive;
        // Semantic sources, in order: (1) sensitive terms are semantic,
        // (2) a semantic-table match, (3) otherwise the term only has length.
        term.semantic = sensitive || policy.semantic_match(term.text) != nullptr;
    }
    return terms;
}

std::vector<DetectedVariable> lexicon_detections(const std::vector<Term>& terms,
                                                 const PolicyTable& policy,
                                                 const std::vector<DetectedVariable>& existing) {
    std::vector<DetectedVariable> out;
    if (policy.lexicon.empty()) return out;
    for (const auto& term : terms) {
        auto lex = policy.lexicon.find(lower(term.text));
        if (lex == policy.lexicon.end()) continue;
        bool blocked = false;
        for (const auto& det : existing) {
            if (det.match_end > term.begin && det.match_begin < term.end) {
                blocked = true;
                break;
            }
        }
        if (blocked) continue;
        DetectedVariable d;
        d.class_name = lex->second;
        d.begin = term.begin;
        d.end = term.end;
        d.original = term.text;
        d.placeholder = subject_placeholder(lex->second);
        d.match_begin = term.begin;
        d.match_end = term.end;
        out.push_back(std::move(d));
    }
    return out;
}

const SensitivityRule* detection_rule(const DetectedVariable& detection, const PolicyTable& policy) {
    if (const auto* rule = policy.rule_for_subject(detection.class_name)) return rule;
    return policy.rule_for_class(detection.class_name);
}

std::vector<DetectedVariable> anonymization_order(std::vector<DetectedVariable> detections,
                                                  const PolicyTable& policy) {
    std::stable_sort(detections.begin(), detections.end(),
                     [&](const DetectedVariable& a, const DetectedVariable& b) {
                         const SensitivityRule* ra = detection_rule(a, policy);
                         const SensitivityRule* rb = detection_rule(b, policy);
                         const int sa = ra ? ra->severity : 0;
                         const int sb = rb ? rb->severity : 0;
                         if (sa != sb) return sa > sb;
                         return a.begin < b.begin;
                     });
    return detections;
}

}  // namespace logcleanse
