#include "logcleanse/variable_detector.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace logcleanse {

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
    return out;
}

// Case-insensitive: the table's classes are written in lowercase while real
// messages mix cases ("Siavash", "0xFF"), and the worked examples expect them
// to be detected.
std::regex compile(const std::string& pattern, const std::string& where) {
    try {
        return std::regex(pattern, std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
    } catch (const std::regex_error& e) {
        throw PatternCompileError(where + ": " + e.what());
    }
}

VariableClass make_class(std::string name, int rank, std::string placeholder, std::string pattern,
                         int var_group, std::vector<std::string> hints, bool needs_digit) {
    VariableClass c;
    c.name = std::move(name);
    c.pattern = std::move(pattern);
    c.rank = rank;
    c.placeholder = std::move(placeholder);
    c.var_group = var_group;
    c.hints = std::move(hints);
    c.needs_digit = needs_digit;
    c.compiled = compile(c.pattern, "builtin class " + c.name);
    return c;
}

std::vector<VariableClass> make_builtins() {
    std::vector<VariableClass> v;
    v.push_back(make_class("Path", 0, "#PATH#", R"(([\(\s\,\>\:\=])(([\/][a-z0-9_\.\-\:]*)+))", 2, {"/"}, false));
    v.push_back(make_class("Version", 1, "#VER#", R"(([\w\.\-]+x86_64))", 1, {"x86_64"}, false));
    v.push_back(make_class("Email", 2, "#EMAIL#", R"(([a-z0-9_\-\.]+@([a-z0-9_-]+\.)+[a-z]+))", 1, {"@"}, false));
    v.push_back(make_class("DateTime", 3, "#DT#", R"((\d{4}-\d{2}-\d{2})T(\d{2}:\d{2}:\d{2}))", 0, {"-", ":"}, true));
    v.push_back(make_class("IPv4", 4, "#IP4#", R"((\d+\.\d+\.\d+\.\d+))", 1, {"."}, true));
    v.push_back(make_class("Port", 5, "#PORT#", R"(([\W])(port \d+))", 2, {"port "}, true));
    v.push_back(make_class("Parameter", 6, "#PRM#", R"((\$[a-z0-9_]+))", 1, {"$"}, false));
    v.push_back(make_class("URID", 7, "#UID#", R"((uid=[\w\-]+))", 1, {"uid="}, false));
    v.push_back(make_class("User", 8, "#USR#", R"((for )((user\ )*[a-z0-9_-]+))", 2, {"for "}, false));
    v.push_back(make_class("Library", 9, "#LIB#", R"(([a-z0-9_\-]+\.so(\.\d*)*))", 1, {".so"}, false));
    v.push_back(make_class("HardwareAddress", 10, "#HWA#", R"((0[x][a-f0-9]+\-0[x][a-f0-9]+))", 1, {"0x", "-"}, false));
    v.push_back(make_class("HexNumber", 11, "#HEX#", R"((0[x][a-f0-9]+))", 1, {"0x"}, false));
    v.push_back(make_class("Percentage", 12, "#PCT#", R"((\d+\.*[\d]*\%))", 1, {"%"}, true));
    v.push_back(make_class("SerialNumber", 13, "#SRN#", R"((\s)(([a-f0-9\.\-]+\:)+)(\s))", 2, {":"}, false));
    v.push_back(make_class("Size", 14, "#SIZE#", R"(([^a-z0-9])(\d+[bkmg])([^a-z0-9]))", 2, {}, true));
    return v;
}

bool valid_placeholder(std::string_view p) {
    if (p.size() < 3 || p.front() != '#' || p.back() != '#') return false;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        char c = p[i];
        if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) return false;
    }
    return true;
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

bool hints_pass(const VariableClass& cls, std::string_view shadow, bool has_digit) {
    if (cls.needs_digit && !has_digit) return false;
    for (const auto& h : cls.hints)
        if (shadow.find(h) == std::string_view::npos) return false;
    return true;
}

bool overlaps(std::size_t a_begin, std::size_t a_end, std::size_t b_begin, std::size_t b_end) {
    return a_begin < b_end && b_begin < a_end;
}

}  // namespace

const std::vector<VariableClass>& builtin_classes() {
    static const std::vector<VariableClass> v = make_builtins();
    return v;
}

std::vector<VariableClass> load_patterns(std::string_view source, bool include_defaults) {
    std::vector<VariableClass> classes;
    if (include_defaults) classes = builtin_classes();

    std::istringstream in{std::string(source)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto where = "pattern table line " + std::to_string(line_no);
        auto cols = split_tabs(line);
        if (cols.size() != 4 && cols.size() != 5)
            throw PatternCompileError(where + ": expected rank<TAB>name<TAB>placeholder<TAB>regex[<TAB>var_group]");

        VariableClass c;
        auto [p1, e1] = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), c.rank);
        if (e1 != std::errc{} || p1 != cols[0].data() + cols[0].size())
            throw PatternCompileError(where + ": bad rank '" + cols[0] + "'");
        c.name = cols[1];
        c.placeholder = cols[2];
        c.pattern = cols[3];
        if (c.name.empty()) throw PatternCompileError(where + ": empty class name");
        if (!valid_placeholder(c.placeholder))
            throw PatternCompileError(where + ": placeholder must match #[A-Z0-9]+#");
        if (cols.size() == 5) {
            auto [p2, e2] = std::from_chars(cols[4].data(), cols[4].data() + cols[4].size(), c.var_group);
            if (e2 != std::errc{} || p2 != cols[4].data() + cols[4].size() || c.var_group < 0)
                throw PatternCompileError(where + ": bad var_group '" + cols[4] + "'");
        }
        c.compiled = compile(c.pattern, where);
        classes.push_back(std::move(c));
    }

    std::sort(classes.begin(), classes.end(),
              [](const VariableClass& a, const VariableClass& b) { return a.rank < b.rank; });
    for (std::size_t i = 1; i < classes.size(); ++i)
        if (classes[i].rank == classes[i - 1].rank)
            throw DuplicateRank("rank " + std::to_string(classes[i].rank) + " used by both " +
                                classes[i - 1].name + " and " + classes[i].name);
    return classes;
}

std::vector<VariableClass> load_patterns_file(const std::string& path, bool include_defaults) {
    std::ifstream in(path);
    if (!in) throw PatternCompileError("cannot open pattern table: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_patterns(buf.str(), include_defaults);
}

std::vector<DetectedVariable> detect(std::string_view message, const std::vector<VariableClass>& classes) {
    const std::string shadow = ascii_lower(message);  // for the substring hints only
    const bool has_digit = std::any_of(shadow.begin(), shadow.end(),
                                       [](char c) { return c >= '0' && c <= '9'; });

    std::vector<DetectedVariable> detections;
    // Full match spans already claimed by earlier-ranked classes.
    std::vector<std::pair<std::size_t, std::size_t>> claimed;

    for (const auto& cls : classes) {
        if (!hints_pass(cls, shadow, has_digit)) continue;
        std::size_t pos = 0;
        std::cmatch m;
        while (pos < message.size() &&
               std::regex_search(message.data() + pos, message.data() + message.size(), m, cls.compiled)) {
            const std::size_t match_begin = pos + static_cast<std::size_t>(m.position(0));
            const std::size_t match_end = match_begin + static_cast<std::size_t>(m.length(0));
            if (match_end == match_begin) {  // zero-width match, step forward
                ++pos;
                continue;
            }
            bool blocked = false;
            for (const auto& [cb, ce] : claimed) {
                if (overlaps(match_begin, match_end, cb, ce)) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) {
                pos = match_begin + 1;
                continue;
            }

            std::size_t var_begin = match_begin;
            std::size_t var_end = match_end;
            if (cls.var_group > 0 && static_cast<std::size_t>(cls.var_group) < m.size() &&
                m[cls.var_group].matched) {
                var_begin = pos + static_cast<std::size_t>(m.position(cls.var_group));
                var_end = var_begin + static_cast<std::size_t>(m.length(cls.var_group));
            }

            DetectedVariable d;
            d.class_name = cls.name;
            d.begin = var_begin;
            d.end = var_end;
            d.original = std::string(message.substr(var_begin, var_end - var_begin));
            d.placeholder = cls.placeholder;
            d.match_begin = match_begin;
            d.match_end = match_end;
            detections.push_back(std::move(d));
            claimed.emplace_back(match_begin, match_end);
            pos = match_end;
        }
    }

    std::sort(detections.begin(), detections.end(),
              [](const DetectedVariable& a, const DetectedVariable& b) { return a.begin < b.begin; });
    return detections;
}

std::string constantify(std::string_view message,
                        const std::vector<DetectedVariable>& detections,
                        const std::optional<std::set<std::string>>& only) {
    std::vector<const DetectedVariable*> selected;
    for (const auto& d : detections) {
        if (d.end > message.size() ||
            message.substr(d.begin, d.end - d.begin) != d.original)
            throw SpanMismatch("detection '" + d.original + "' no longer matches the message");
        if (only && !only->count(d.class_name)) continue;
        selected.push_back(&d);
    }
    std::sort(selected.begin(), selected.end(),
              [](const DetectedVariable* a, const DetectedVariable* b) { return a->begin > b->begin; });

    std::string out(message);
    for (const auto* d : selected)
        out.replace(d->begin, d->end - d->begin, d->placeholder);
    return out;
}

}  // namespace logcleanse
