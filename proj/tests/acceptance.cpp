// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exits non-zero when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "logcleanse/pipeline.hpp"
#include "support/corpus_gen.hpp"

using namespace logcleanse;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("ACCEPT %d %-28s %s  %s\n", criterion, name.c_str(), pass ? "PASS" : "FAIL",
                detail.c_str());
    if (!pass) ++failures;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LOGCLEANSE_CLI_PATH) + " " + args + " 2>/dev/null";
    return std::system(cmd.c_str());
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

fs::path work_dir() {
    auto dir = fs::temp_directory_path() / "logcleanse-acceptance";
    fs::create_directories(dir);
    return dir;
}

bool is_hex_key(const std::string& text) {
    if (text.size() < 4 || text.size() % 2 != 0 || text.size() > 64) return false;
    for (char c : text)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    return true;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string message_of(const std::string& emitted_line) {
    auto space = emitted_line.find(' ');
    return space == std::string::npos ? std::string() : emitted_line.substr(space + 1);
}

// ---- criterion 1: the five-stage quality ladder ---------------------------

void criterion_1() {
    const auto start = Clock::now();
    auto policy = preset_paper_table2();
    ReferenceTable table(32);
    auto entry = parse_line("1462053899 Accepted publickey for Siavash from 4.3.2.1");
    auto processed = decide(anonymize(entry, builtin_classes(), policy), table, policy,
                            builtin_classes(), 32);

    const double expected[5] = {0.33, 0.31, 0.25, 0.125, 0.81};
    const char* labels[5] = {"raw", "anon#1", "anon#2", "anon#3", "encoded"};
    bool pass = processed.ladder.size() == 5;
    std::string detail;
    for (std::size_t i = 0; pass && i < 5; ++i) {
        const auto& stage = processed.ladder[i];
        if (stage.label != labels[i] || std::abs(stage.quality.q - expected[i]) > 0.005)
            pass = false;
    }
    for (const auto& stage : processed.ladder) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%s=%.4f ", stage.label.c_str(), stage.quality.q);
        detail += buf;
    }
    const double elapsed = seconds_since(start);
    pass = pass && elapsed < 1.0;
    report(1, "quality-ladder", pass, detail + "in " + std::to_string(elapsed) + "s");
}

// ---- criterion 2: the classification flag matrix --------------------------

void criterion_2() {
    auto policy = preset_paper_table2();
    const std::string msg = "Accepted publickey for Siavash from 4.3.2.1";
    auto terms = classify_terms(tokenize(msg), detect(msg, builtin_classes()), policy);
    const bool expect_sensitive[6] = {false, false, false, true, false, true};
    const bool expect_semantic[6] = {true, true, false, true, false, true};
    bool pass = terms.size() == 6;
    for (int i = 0; pass && i < 6; ++i)
        pass = terms[i].sensitive == expect_sensitive[i] && terms[i].semantic == expect_semantic[i];
    std::string detail = "sensitive/semantic: ";
    for (const auto& t : terms)
        detail += std::string(t.sensitive ? "Y" : "-") + (t.semantic ? "Y " : "- ");
    report(2, "flag-matrix", pass, detail);
}

// ---- criterion 3: the four-entry sample, encode and anonymize modes -------

void criterion_3() {
    const fs::path dir = work_dir();
    const std::string fixtures = LOGCLEANSE_FIXTURES_DIR;
    const auto table_path = dir / "sample-ref.json";
    const auto encoded_path = dir / "sample-encoded.log";
    const auto anon_path = dir / "sample-anon.log";

    int rc1 = run_cli("--mode encode --policy " + fixtures + "/site.policy --patterns " +
                      fixtures + "/site.patterns --annotations " + fixtures +
                      "/sample.annotations --table " + table_path.string() + " --input " +
                      fixtures + "/sample.log --output " + encoded_path.string());
    int rc2 = run_cli("--mode anonymize --policy " + fixtures + "/site.policy --patterns " +
                      fixtures + "/site.patterns --input " + fixtures + "/sample.log --output " +
                      anon_path.string());

    auto encoded = read_lines(encoded_path);
    auto anonymized = read_lines(anon_path);
    bool pass = rc1 == 0 && rc2 == 0 && encoded.size() == 4 && anonymized.size() == 4;

    // Digest values frozen from the reference SHAKE-128 implementation over
    // the canonical pattern strings.
    const std::string expected_encoded[4] = {
        "9000af49", "75d85237", "965db7f9",
        "ACPI: LAPIC (acpi_id[0x55] lapic_id[0xff] disabled)"};
    const std::string expected_anon[4] = {
        "(#USR#) cmd (#PATH# > output.stat)",
        "pam_unix(sshd:session): session closed for #USR#",
        "disabling lock debugging due to kernel taint",
        "ACPI: LAPIC (acpi_id[0x55] lapic_id[0xff] disabled)"};

    int keys = 0;
    for (int i = 0; pass && i < 4; ++i) {
        if (message_of(encoded[i]) != expected_encoded[i]) pass = false;
        if (message_of(anonymized[i]) != expected_anon[i]) pass = false;
        if (is_hex_key(message_of(encoded[i]))) ++keys;
    }
    pass = pass && keys == 3;

    // The published reference table carries the annotated meanings.
    if (pass) {
        auto table = ReferenceTable::load_json(table_path.string());
        pass = table.size() == 3 &&
               table.lookup("9000af49").meaning == "A command executed by user" &&
               table.lookup("75d85237").meaning == "A user logged out" &&
               table.lookup("965db7f9").meaning ==
                   "Disabling lock debugging due to kernel taint";
    }
    report(3, "four-entry-sample", pass,
           std::to_string(keys) + " hash-key outputs + " + std::to_string(4 - keys) + " textual");
}

// ---- criterion 4: desk-scale reduction on the reference corpus shape ------

struct CorpusArtifacts {
    fs::path input, encoded_out, anon_out, table, report;
    corpus::Corpus corpus;
    double encode_seconds = 0;
};

CorpusArtifacts corpus_artifacts;

void criterion_4() {
    const fs::path dir = work_dir();
    CorpusArtifacts& art = corpus_artifacts;
    art.input = dir / "corpus.log";
    art.encoded_out = dir / "corpus-encoded.log";
    art.anon_out = dir / "corpus-anon.log";
    art.table = dir / "corpus-ref.json";
    art.report = dir / "corpus-report.json";

    art.corpus = corpus::make(100000, 20160501);
    {
        std::ofstream out(art.input, std::ios::trunc);
        for (const auto& line : art.corpus.lines) out << line << '\n';
    }

    // Shape preconditions: mean message length and term count.
    std::uint64_t msg_bytes = 0, terms = 0;
    for (const auto& line : art.corpus.lines) {
        const std::string msg = message_of(line);
        msg_bytes += msg.size();
        terms += tokenize(msg).size();
    }
    const double mean_len = double(msg_bytes) / art.corpus.lines.size();
    const double mean_terms = double(terms) / art.corpus.lines.size();

    const auto start = Clock::now();
    int rc = run_cli("--mode encode --policy paper-table2 --table " + art.table.string() +
                     " --report " + art.report.string() + " --input " + art.input.string() +
                     " --output " + art.encoded_out.string());
    art.encode_seconds = seconds_since(start);

    int rc2 = run_cli("--mode anonymize --policy paper-table2 --report " +
                      (dir / "anon-report.json").string() + " --input " + art.input.string() +
                      " --output " + art.anon_out.string());

    bool pass = rc == 0 && rc2 == 0;
    double reduction = 0, anon_delta = 0, coverage = 0;
    std::size_t unique_patterns = 0;
    if (pass) {
        auto doc = nlohmann::json::parse(slurp(art.report));
        reduction = doc.at("reduction_pct").get<double>();
        unique_patterns = doc.at("unique_patterns").get<std::size_t>();

        auto anon_doc = nlohmann::json::parse(slurp(dir / "anon-report.json"));
        anon_delta = std::abs(anon_doc.at("reduction_pct").get<double>());

        auto table = ReferenceTable::load_json(art.table.string());
        coverage = frequent_pattern_coverage(table, 40);

        pass = mean_len >= 40.0 && mean_terms >= 5.0;
        pass = pass && unique_patterns >= 1900 && unique_patterns <= 2100;
        pass = pass && coverage >= 0.90;
        pass = pass && reduction >= 50.0;
        pass = pass && anon_delta < 2.0;
        pass = pass && art.encode_seconds < 60.0;
    }
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "reduction=%.1f%% anon-delta=%.2f%% patterns=%zu top40=%.1f%% "
                  "mean-len=%.1f in %.1fs",
                  reduction, anon_delta, unique_patterns, coverage * 100, mean_len,
                  art.encode_seconds);
    report(4, "storage-reduction", pass, buf);
}

// ---- criterion 5: completeness ---------------------------------------------

void criterion_5() {
    std::ostringstream manifest;
    int skipped = 0;
    for (int n = 0; n < 100; ++n)
        for (int d = 1; d <= 10; ++d) {
            if (skipped < 30 && d == 5 && n < 30) {
                ++skipped;
                continue;
            }
            manifest << "node" << n << "\t2016-05-" << (d < 10 ? "0" : "") << d << "\n";
        }
    std::istringstream in(manifest.str());
    auto matrix = load_manifest(in);
    const double value = completeness(matrix);
    const bool pass =
        matrix.nodes.size() == 100 && matrix.days.size() == 10 && value == 0.970;
    report(5, "completeness", pass, "completeness=" + std::to_string(value));
}

// ---- criterion 6: property suite -------------------------------------------

void criterion_6() {
    const fs::path dir = work_dir();
    auto policy = preset_paper_table2();
    const auto& classes = builtin_classes();

    // (a) idempotence over 10,000 generated entries, encode and anonymize.
    auto small = corpus::make(10000, 77);
    bool idempotent = true;
    {
        ReferenceTable table(32);
        std::vector<std::string> first_pass;
        for (const auto& line : small.lines) {
            auto p = process_line(line, classes, policy, &table, 32, false, true);
            first_pass.push_back(std::to_string(p.entry.timestamp) + " " + p.final_text);
        }
        for (std::size_t i = 0; i < first_pass.size() && idempotent; ++i) {
            auto p = process_line(first_pass[i], classes, policy, &table, 32, false, true);
            idempotent = (std::to_string(p.entry.timestamp) + " " + p.final_text) == first_pass[i];
        }
        for (std::size_t i = 0; i < small.lines.size() && idempotent; ++i) {
            auto a1 = process_line(small.lines[i], classes, policy, nullptr, 32, false, false);
            auto a2 = process_line(std::to_string(a1.entry.timestamp) + " " + a1.final_text,
                                   classes, policy, nullptr, 32, false, false);
            idempotent = a1.final_text == a2.final_text;
        }
    }
    report(6, "prop-a-idempotence", idempotent, "10000 entries, encode + anonymize modes");

    // (b) zero sensitive-substring leakage over all criterion-4 artifacts.
    bool clean = true;
    std::string leaked;
    for (const auto* path : {&corpus_artifacts.encoded_out, &corpus_artifacts.anon_out,
                             &corpus_artifacts.table}) {
        const std::string blob = slurp(*path);
        for (const auto& secret : corpus_artifacts.corpus.secrets) {
            if (blob.find(secret) != std::string::npos) {
                clean = false;
                leaked = secret + " in " + path->filename().string();
            }
        }
    }
    report(6, "prop-b-no-leakage", clean,
           clean ? "no sensitive value in encoded/anonymized/table outputs" : leaked);

    // (c) hash determinism and the prefix property across bit lengths.
    bool hash_ok = true;
    const std::string long_hex = Shake128::hex("Accepted #KEY# for #USR# from #IP4#", 256);
    for (unsigned bits = 16; bits <= 256; bits += 8) {
        EventPattern p{"Accepted #KEY# for #USR# from #IP4#", 6};
        hash_ok = hash_ok && hash_pattern(p, bits).hex == long_hex.substr(0, bits / 4);
        hash_ok = hash_ok && hash_pattern(p, bits).hex == hash_pattern(p, bits).hex;
    }
    hash_ok = hash_ok && long_hex.substr(0, 8) == "35a2b1e8";
    report(6, "prop-c-hash-prefix", hash_ok, "16..256 bits, frozen 32-bit digest 35a2b1e8");

    // (d) a forced 16-bit collision resolves by extension, injectivity kept.
    bool collision_ok = false;
    {
        std::unordered_map<std::string, std::string> seen;
        std::string first, second;
        for (int i = 0; first.empty(); ++i) {
            std::string text = "collision probe " + std::to_string(i);
            auto [it, inserted] = seen.emplace(Shake128::hex(text, 16), text);
            if (!inserted) {
                first = it->second;
                second = text;
            }
        }
        ReferenceTable table(16);
        auto k1 = table.get_or_insert({first, 2});
        auto k2 = table.get_or_insert({second, 2});
        collision_ok = k1.hex.size() == 4 && k2.hex.size() >= 6 && k1.hex != k2.hex &&
                       table.lookup(k1.hex).pattern == first &&
                       table.lookup(k2.hex).pattern == second;
    }
    report(6, "prop-d-collision-extend", collision_ok, "16-bit collision grew to >= 24 bits");

    // (e) reference-table round-trip for every encoded entry of a run.
    bool round_trip = true;
    {
        ReferenceTable table(32);
        auto out = process_stream(small.lines, classes, policy, table, 32);
        std::uint64_t encoded = 0;
        for (const auto& p : out) {
            if (p.state != EntryState::encoded) continue;
            ++encoded;
            if (table.lookup(*p.key).pattern != *p.pattern) round_trip = false;
        }
        round_trip = round_trip && encoded > 0 && table.total_frequency() == encoded;
    }
    report(6, "prop-e-round-trip", round_trip, "every encoded entry resolves to its pattern");

    // (f) worker-count invariance through the CLI, byte-identical outputs.
    bool invariant = false;
    {
        const auto in_path = dir / "workers-in.log";
        {
            std::ofstream out(in_path, std::ios::trunc);
            for (const auto& line : small.lines) out << line << '\n';
        }
        const auto out1 = dir / "workers-1.log", out8 = dir / "workers-8.log";
        const auto tab1 = dir / "workers-1.json", tab8 = dir / "workers-8.json";
        int rc1 = run_cli("--mode encode --policy paper-table2 --workers 1 --table " +
                          tab1.string() + " --input " + in_path.string() + " --output " +
                          out1.string());
        int rc8 = run_cli("--mode encode --policy paper-table2 --workers 8 --table " +
                          tab8.string() + " --input " + in_path.string() + " --output " +
                          out8.string());
        invariant = rc1 == 0 && rc8 == 0 && slurp(out1) == slurp(out8) && !slurp(out1).empty();
        if (invariant) {
            auto t1 = ReferenceTable::load_json(tab1.string());
            auto t8 = ReferenceTable::load_json(tab8.string());
            auto rows1 = t1.rows(), rows8 = t8.rows();
            invariant = rows1.size() == rows8.size();
            for (std::size_t i = 0; invariant && i < rows1.size(); ++i)
                invariant = rows1[i].key == rows8[i].key && rows1[i].pattern == rows8[i].pattern &&
                            rows1[i].count == rows8[i].count;
        }
    }
    report(6, "prop-f-worker-invariance", invariant, "1 vs 8 workers byte-identical");

    // (g) key-length optimization shrinks totals and is idempotent.
    bool optimize_ok = false;
    {
        auto table = ReferenceTable::load_json(corpus_artifacts.table.string());
        auto bytes = [](const std::vector<RefRow>& rows) {
            std::uint64_t total = 0;
            for (const auto& r : rows) total += r.count * (r.bits / 8);
            return total;
        };
        const auto before = bytes(table.rows());
        table.optimize_key_lengths();
        const auto once = bytes(table.rows());
        auto snapshot = table.rows();
        auto remap = table.optimize_key_lengths();
        const auto twice = bytes(table.rows());
        auto snapshot2 = table.rows();
        optimize_ok = once <= before && twice == once && remap.empty() &&
                      snapshot.size() == snapshot2.size();
        for (std::size_t i = 0; optimize_ok && i < snapshot.size(); ++i)
            optimize_ok = snapshot[i].key == snapshot2[i].key;
        std::set<std::string> keys;
        for (const auto& row : table.rows())
            if (!keys.insert(row.key).second) optimize_ok = false;
    }
    report(6, "prop-g-optimize-keys", optimize_ok, "bytes non-increasing, idempotent, injective");
}

// ---- criterion 7: post-processing speedup proxy ----------------------------

void criterion_7() {
    bool pass = false;
    double mean_in = 0, mean_out = 0;
    if (fs::exists(corpus_artifacts.report)) {
        auto doc = nlohmann::json::parse(slurp(corpus_artifacts.report));
        mean_in = doc.at("mean_terms_per_entry_in").get<double>();
        mean_out = doc.at("mean_terms_per_entry_out").get<double>();
        pass = mean_in >= 5.0 && mean_out <= 1.1;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "terms/entry %.2f raw vs %.2f encoded", mean_in, mean_out);
    report(7, "speedup-proxy", pass, buf);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    if (failures == 0)
        std::printf("acceptance: all criteria PASS\n");
    else
        std::printf("acceptance: %d criterion check(s) FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
