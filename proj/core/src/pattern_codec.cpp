#include "logcleanse/pattern_codec.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace logcleanse {

namespace {

void check_bits(unsigned bits) {
    if (bits < 16 || bits > 256 || bits % 8 != 0)
        throw UnsupportedLength("hash length must be a multiple of 8 in [16, 256], got " +
                                std::to_string(bits));
}

}  // namespace

HashKey hash_pattern(const EventPattern& pattern, unsigned bits) {
    check_bits(bits);
    return {Shake128::hex(pattern.text, bits), bits};
}

ReferenceTable::ReferenceTable(unsigned default_bits) : default_bits_(default_bits) {
    check_bits(default_bits);
}

ReferenceTable::ReferenceTable(ReferenceTable&& other) noexcept {
    std::lock_guard lock(other.mutex_);
    default_bits_ = other.default_bits_;
    rows_ = std::move(other.rows_);
    by_pattern_ = std::move(other.by_pattern_);
    by_key_ = std::move(other.by_key_);
    annotations_ = std::move(other.annotations_);
}

ReferenceTable& ReferenceTable::operator=(ReferenceTable&& other) noexcept {
    if (this == &other) return *this;
    std::scoped_lock lock(mutex_, other.mutex_);
    default_bits_ = other.default_bits_;
    rows_ = std::move(other.rows_);
    by_pattern_ = std::move(other.by_pattern_);
    by_key_ = std::move(other.by_key_);
    annotations_ = std::move(other.annotations_);
    return *this;
}

HashKey ReferenceTable::get_or_insert(const EventPattern& pattern, std::string_view meaning) {
    std::lock_guard lock(mutex_);
    auto it = by_pattern_.find(pattern.text);
    if (it != by_pattern_.end()) {
        RefRow& row = rows_[it->second];
        ++row.count;
        return {row.key, row.bits};
    }
    return insert_locked(pattern, meaning);
}

HashKey ReferenceTable::insert_locked(const EventPattern& pattern, std::string_view meaning) {
    unsigned bits = default_bits_;
    std::string hex = Shake128::hex(pattern.text, bits);
    while (by_key_.count(hex)) {
        bits += 8;
        hex = Shake128::hex(pattern.text, bits);
    }

    RefRow row;
    row.key = hex;
    row.bits = bits;
    row.pattern = pattern.text;
    row.count = 1;
    if (auto note = annotations_.find(pattern.text); note != annotations_.end())
        row.meaning = note->second;
    else if (!meaning.empty())
        row.meaning = std::string(meaning);
    else
        row.meaning = pattern.text;

    by_pattern_.emplace(row.pattern, rows_.size());
    by_key_.emplace(row.key, rows_.size());
    rows_.push_back(std::move(row));
    return {rows_.back().key, rows_.back().bits};
}

std::optional<RefRow> ReferenceTable::touch_key(std::string_view key_hex) {
    std::lock_guard lock(mutex_);
    auto it = by_key_.find(std::string(key_hex));
    if (it == by_key_.end()) return std::nullopt;
    RefRow& row = rows_[it->second];
    ++row.count;
    return row;
}

RefRow ReferenceTable::lookup(std::string_view key_hex) const {
    auto row = try_lookup(key_hex);
    if (!row) throw UnknownKey("no reference-table row for key " + std::string(key_hex));
    return *row;
}

std::optional<RefRow> ReferenceTable::try_lookup(std::string_view key_hex) const {
    std::lock_guard lock(mutex_);
    auto it = by_key_.find(std::string(key_hex));
    if (it == by_key_.end()) return std::nullopt;
    return rows_[it->second];
}

bool ReferenceTable::contains_pattern(std::string_view pattern_text) const {
    std::lock_guard lock(mutex_);
    return by_pattern_.count(std::string(pattern_text)) > 0;
}

std::unordered_map<std::string, std::string> ReferenceTable::optimize_key_lengths() {
    std::lock_guard lock(mutex_);

    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows_[a].count != rows_[b].count) return rows_[a].count > rows_[b].count;
        return rows_[a].pattern < rows_[b].pattern;
    });

    std::unordered_map<std::string, std::string> remap;
    std::unordered_map<std::string, std::size_t> new_by_key;
    new_by_key.reserve(rows_.size());
    for (std::size_t idx : order) {
        RefRow& row = rows_[idx];
        unsigned bits = 16;
        std::string hex = Shake128::hex(row.pattern, bits);
        while (new_by_key.count(hex)) {
            bits += 8;
            hex = Shake128::hex(row.pattern, bits);
        }
        new_by_key.emplace(hex, idx);
        if (hex != row.key) remap.emplace(row.key, hex);
        row.key = hex;
        row.bits = bits;
    }
    by_key_ = std::move(new_by_key);
    return remap;
}

std::vector<RefRow> ReferenceTable::rows() const {
    std::lock_guard lock(mutex_);
    std::vector<RefRow> out = rows_;
    std::sort(out.begin(), out.end(), [](const RefRow& a, const RefRow& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.key < b.key;
    });
    return out;
}

std::uint64_t ReferenceTable::total_frequency() const {
    std::lock_guard lock(mutex_);
    std::uint64_t total = 0;
    for (const auto& row : rows_) total += row.count;
    return total;
}

std::size_t ReferenceTable::size() const {
    std::lock_guard lock(mutex_);
    return rows_.size();
}

void ReferenceTable::load_annotations_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open annotations: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) continue;
        add_annotation(line.substr(0, tab), line.substr(tab + 1));
    }
}

void ReferenceTable::add_annotation(std::string pattern_text, std::string meaning) {
    std::lock_guard lock(mutex_);
    if (auto it = by_pattern_.find(pattern_text); it != by_pattern_.end())
        rows_[it->second].meaning = meaning;
    annotations_[std::move(pattern_text)] = std::move(meaning);
}

void ReferenceTable::save_json(const std::string& path) const {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& row : rows()) {
        doc.push_back({{"key", row.key},
                       {"bits", row.bits},
                       {"pattern", row.pattern},
                       {"meaning", row.meaning},
                       {"count", row.count}});
    }

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error("cannot write reference table: " + tmp);
        out << doc.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

ReferenceTable ReferenceTable::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open reference table: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw TableCorrupt(std::string("reference table is not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw TableCorrupt("reference table must be a JSON array");

    ReferenceTable table;
    std::lock_guard lock(table.mutex_);
    for (const auto& item : doc) {
        RefRow row;
        try {
            row.key = item.at("key").get<std::string>();
            row.bits = item.at("bits").get<unsigned>();
            row.pattern = item.at("pattern").get<std::string>();
            row.meaning = item.at("meaning").get<std::string>();
            row.count = item.at("count").get<std::uint64_t>();
        } catch (const nlohmann::json::exception& e) {
            throw TableCorrupt(std::string("bad reference table row: ") + e.what());
        }
        if (row.count == 0) throw TableCorrupt("row with zero frequency: " + row.key);
        if (row.key.size() != row.bits / 4)
            throw TableCorrupt("key length does not match bits: " + row.key);
        if (table.by_key_.count(row.key))
            throw TableCorrupt("duplicate key: " + row.key);
        if (table.by_pattern_.count(row.pattern))
            throw TableCorrupt("duplicate pattern: " + row.pattern);
        table.by_key_.emplace(row.key, table.rows_.size());
        table.by_pattern_.emplace(row.pattern, table.rows_.size());
        table.rows_.push_back(std::move(row));
    }
    return table;
}

}  // namespace logcleanse
