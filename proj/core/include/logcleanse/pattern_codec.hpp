#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "logcleanse/errors.hpp"
#include "logcleanse/shake128.hpp"

namespace logcleanse {

/// A fully constantified message: constant text plus canonical placeholders.
struct EventPattern {
    std::string text;
    std::size_t term_count = 0;
};

/// A hash-key: the first `bits/8` bytes of the SHAKE-128 output over the
/// UTF-8 pattern text, hex-encoded lowercase.
struct HashKey {
    std::string hex;
    unsigned bits = 32;
};

struct RefRow {
    std::string key;
    unsigned bits = 32;
    std::string pattern;
    std::string meaning;
    std::uint64_t count = 0;
};

/// Throws UnsupportedLength unless bits is a multiple of 8 in [16, 256].
HashKey hash_pattern(const EventPattern& pattern, unsigned bits);

/// The hash-key reference table published alongside encoded logs: an
/// injective mapping key -> (pattern, meaning, frequency). get_or_insert is
/// atomic so concurrent encoders can share one table.
class ReferenceTable {
public:
    explicit ReferenceTable(unsigned default_bits = 32);

    // Movable (the mutex itself is not transferred); callers must not move
    // a table that other threads are using.
    ReferenceTable(ReferenceTable&& other) noexcept;
    ReferenceTable& operator=(ReferenceTable&& other) noexcept;
    ReferenceTable(const ReferenceTable&) = delete;
    ReferenceTable& operator=(const ReferenceTable&) = delete;

    /// Returns the pattern's key, inserting it on first sight. A key collision
    /// with a different pattern extends this pattern's output by 8 bits until
    /// unique. The meaning defaults to an annotation for the pattern, then to
    /// the supplied text, then to the pattern text itself.
    HashKey get_or_insert(const EventPattern& pattern, std::string_view meaning = {});

    /// Increments the row holding exactly this key, if any, and returns it.
    std::optional<RefRow> touch_key(std::string_view key_hex);

    /// Exact-match lookup. Throws UnknownKey.
    RefRow lookup(std::string_view key_hex) const;
    std::optional<RefRow> try_lookup(std::string_view key_hex) const;

    bool contains_pattern(std::string_view pattern_text) const;

    /// Reassigns every pattern, most frequent first, the shortest digest
    /// prefix (minimum 16 bits, 8-bit steps) that keeps the mapping injective.
    /// Returns the re-emission map old key -> new key. Requires exclusive
    /// access: no concurrent writers.
    std::unordered_map<std::string, std::string> optimize_key_lengths();

    /// Rows sorted by descending count, ties by key. Total of all counts.
    std::vector<RefRow> rows() const;
    std::uint64_t total_frequency() const;
    std::size_t size() const;
    unsigned default_bits() const { return default_bits_; }

    /// Loads `pattern<TAB>meaning` annotation lines; they override default
    /// meanings of existing and future rows.
    void load_annotations_file(const std::string& path);
    void add_annotation(std::string pattern_text, std::string meaning);

    /// Persists as a JSON array of {key, bits, pattern, meaning, count},
    /// written atomically (temp file + rename).
    void save_json(const std::string& path) const;
    /// Throws TableCorrupt when the document violates injectivity.
    static ReferenceTable load_json(const std::string& path);

private:
    HashKey insert_locked(const EventPattern& pattern, std::string_view meaning);

    mutable std::mutex mutex_;
    unsigned default_bits_;
    std::vector<RefRow> rows_;
    std::unordered_map<std::string, std::size_t> by_pattern_;
    std::unordered_map<std::string, std::size_t> by_key_;
    std::unordered_map<std::string, std::string> annotations_;
};

}  // namespace logcleanse
