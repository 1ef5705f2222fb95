#include "logcleanse/entry.hpp"

#include <cctype>
#include <charconv>

namespace logcleanse {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t';
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's algorithm).
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

// Matches `YYYY-MM-DDThh:mm:ss` at the start of `s` and converts it to epoch
// seconds. Returns false when the prefix does not have that shape.
bool parse_iso_prefix(std::string_view s, std::int64_t& epoch, std::size_t& consumed) {
    static constexpr char kShape[] = "dddd-dd-ddTdd:dd:dd";
    constexpr std::size_t kLen = sizeof(kShape) - 1;
    if (s.size() < kLen) return false;
    for (std::size_t i = 0; i < kLen; ++i) {
        if (kShape[i] == 'd') {
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        } else if (s[i] != kShape[i]) {
            return false;
        }
    }
    auto num = [&](std::size_t pos, std::size_t n) {
        int v = 0;
        for (std::size_t i = 0; i < n; ++i) v = v * 10 + (s[pos + i] - '0');
        return v;
    };
    const int year = num(0, 4);
    const int month = num(5, 2);
    const int day = num(8, 2);
    const int hour = num(11, 2);
    const int minute = num(14, 2);
    const int second = num(17, 2);
    if (month < 1 || month > 12 || day < 1 || day > 31) return false;
    if (hour > 23 || minute > 59 || second > 60) return false;
    epoch = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400
        + hour * 3600 + minute * 60 + second;
    consumed = kLen;
    return true;
}

}  // namespace

bool is_placeholder_token(std::string_view text) {
    if (text.size() < 3 || text.front() != '#' || text.back() != '#') return false;
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
        char c = text[i];
        if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) return false;
    }
    return true;
}

LogEntry parse_line(std::string_view line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
    if (line.empty()) throw MalformedEntry("empty line");

    std::int64_t ts = 0;
    std::size_t consumed = 0;
    const std::size_t first_sep = line.find(' ');
    const std::string_view head = first_sep == std::string_view::npos ? line : line.substr(0, first_sep);
    if (all_digits(head)) {
        auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), ts);
        if (ec != std::errc{} || ptr != head.data() + head.size())
            throw MalformedEntry("timestamp out of range");
        consumed = head.size();
    } else if (!parse_iso_prefix(line, ts, consumed)) {
        throw MalformedEntry("no recognizable timestamp prefix");
    }

    if (consumed >= line.size() || line[consumed] != ' ')
        throw MalformedEntry("timestamp without message");
    std::string_view message = line.substr(consumed + 1);
    if (message.empty()) throw MalformedEntry("empty message");

    LogEntry entry;
    entry.timestamp = ts;
    entry.message = std::string(message);
    entry.raw_length = message.size();
    return entry;
}

std::vector<Term> tokenize(std::string_view message) {
    std::vector<Term> terms;
    std::size_t i = 0;
    while (i < message.size()) {
        while (i < message.size() && is_space(message[i])) ++i;
        if (i >= message.size()) break;
        std::size_t begin = i;
        while (i < message.size() && !is_space(message[i])) ++i;
        Term t;
        t.text = std::string(message.substr(begin, i - begin));
        t.index = terms.size();
        t.begin = begin;
        t.end = i;
        terms.push_back(std::move(t));
    }
    if (terms.empty()) throw EmptyEntry("message has no terms");
    return terms;
}

}  // namespace logcleanse
