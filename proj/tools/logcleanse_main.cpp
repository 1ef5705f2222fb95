#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "logcleanse/corpus_stats.hpp"
#include "logcleanse/pipeline.hpp"

namespace {

using namespace logcleanse;

struct RunConfig {
    std::string mode;
    std::string policy = "paper-table2";
    std::string patterns_path;
    bool default_patterns = true;
    unsigned hash_bits = 32;
    std::string coeff;
    std::string table_path = "reference-table.json";
    std::string annotations_path;
    std::string input = "-";
    std::string output = "-";
    bool lenient = false;
    unsigned workers = 1;
    bool optimize_keys = false;
    std::string gaps_csv_path;
    std::string report_path;
};

int run_completeness(const RunConfig& cfg, std::istream& in, std::ostream& out) {
    CompletenessMatrix matrix = load_manifest(in);
    const double value = completeness(matrix);
    const auto runs = gap_runs(matrix);

    nlohmann::json doc{
        {"completeness", value},
        {"nodes", matrix.nodes.size()},
        {"days", matrix.days.size()},
        {"cells", matrix.present.size()},
        {"gap_runs", nlohmann::json::array()},
    };
    for (const auto& run : runs)
        doc["gap_runs"].push_back(
            {{"node", run.node}, {"start_date", run.start_day}, {"end_date", run.end_day}});
    out << doc.dump(2) << '\n';

    if (!cfg.gaps_csv_path.empty()) {
        std::ofstream csv(cfg.gaps_csv_path, std::ios::trunc);
        if (!csv) throw Error("cannot write " + cfg.gaps_csv_path);
        csv << gaps_csv(runs);
    }
    return 0;
}

Coefficients parse_coeff(const std::string& text) {
    Coefficients c;
    std::istringstream in(text);
    char comma1 = 0, comma2 = 0;
    if (!(in >> c.n >> comma1 >> c.s >> comma2 >> c.r) || comma1 != ',' || comma2 != ',')
        throw Error("--coeff expects n,s,r");
    if (c.n <= 0 || c.n > 1 || c.s <= 0 || c.s > 1 || c.r <= 0 || c.r > 1)
        throw Error("--coeff values must be in (0,1]");
    return c;
}

int run(const RunConfig& cfg) {
    std::ifstream file_in;
    std::istream* in = &std::cin;
    if (cfg.input != "-") {
        file_in.open(cfg.input);
        if (!file_in) throw Error("cannot open input: " + cfg.input);
        in = &file_in;
    }
    std::ofstream file_out;
    std::ostream* out = &std::cout;
    if (cfg.output != "-") {
        file_out.open(cfg.output, std::ios::trunc);
        if (!file_out) throw Error("cannot open output: " + cfg.output);
        out = &file_out;
    }

    if (cfg.mode == "completeness") return run_completeness(cfg, *in, *out);

    PolicyTable policy = load_policy_path_or_preset(cfg.policy);
    if (!cfg.coeff.empty()) policy.coefficients = parse_coeff(cfg.coeff);

    std::vector<VariableClass> classes;
    if (cfg.patterns_path.empty())
        classes = builtin_classes();
    else
        classes = load_patterns_file(cfg.patterns_path, cfg.default_patterns);

    PipelineConfig pipeline_cfg;
    pipeline_cfg.workers = cfg.workers;
    pipeline_cfg.hash_bits = cfg.hash_bits;
    pipeline_cfg.lenient = cfg.lenient;
    pipeline_cfg.encode = cfg.mode != "anonymize";
    pipeline_cfg.emit_lines = cfg.mode != "stats";

    if (cfg.mode == "encode") {
        // Fail before processing anything if the table cannot be written.
        std::ofstream probe(cfg.table_path, std::ios::app);
        if (!probe) throw Error("reference table is not writable: " + cfg.table_path);
    }

    ReferenceTable table(cfg.hash_bits);
    ReferenceTable* table_ptr = pipeline_cfg.encode ? &table : nullptr;
    if (table_ptr && !cfg.annotations_path.empty())
        table.load_annotations_file(cfg.annotations_path);

    PipelineResult result = run_pipeline(*in, *out, classes, policy, table_ptr, pipeline_cfg);

    std::optional<PatternCensus> patterns;
    if (table_ptr) patterns = census(table);

    if (cfg.mode == "encode") {
        if (cfg.optimize_keys) {
            const auto remap = table.optimize_key_lengths();
            std::ofstream csv(cfg.table_path + ".remap.csv", std::ios::trunc);
            if (!csv) throw Error("cannot write re-emission map");
            csv << "old,new\n";
            for (const auto& [old_key, new_key] : remap) csv << old_key << ',' << new_key << '\n';
        }
        table.save_json(cfg.table_path);
        std::cerr << report_text(result.report, patterns ? &*patterns : nullptr);
    } else if (cfg.mode == "stats") {
        *out << report_json(result.report, patterns ? &*patterns : nullptr) << '\n';
        std::cerr << report_text(result.report, patterns ? &*patterns : nullptr);
    }

    if (!cfg.report_path.empty()) {
        std::ofstream report(cfg.report_path, std::ios::trunc);
        if (!report) throw Error("cannot write report: " + cfg.report_path);
        report << report_json(result.report, patterns ? &*patterns : nullptr) << '\n';
    }

    if (result.report.error_entries > 0) {
        std::cerr << result.report.error_entries << " malformed line(s) replaced with "
                  << kMalformedText << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming syslog anonymization and encoding"};
    RunConfig cfg;

    app.add_option("--mode", cfg.mode, "anonymize | encode | stats | completeness")
        ->required()
        ->check(CLI::IsMember({"anonymize", "encode", "stats", "completeness"}));
    app.add_option("--policy", cfg.policy,
                   "Policy file path or preset name (paper-table2, tud-table5)")
        ->envname("LOGCLEANSE_POLICY");
    app.add_option("--patterns", cfg.patterns_path, "Extra pattern-table file");
    app.add_flag("!--no-default-patterns", cfg.default_patterns,
                 "Do not include the built-in pattern classes");
    app.add_option("--hash-bits", cfg.hash_bits, "Hash-key output length in bits (default 32)")
        ->check(CLI::Range(16u, 256u));
    app.add_option("--coeff", cfg.coeff, "Quality coefficients n,s,r (overrides policy)");
    app.add_option("--table", cfg.table_path, "Reference-table JSON path (encode mode)");
    app.add_option("--annotations", cfg.annotations_path, "pattern<TAB>meaning annotation file");
    app.add_option("--input", cfg.input, "Input path, - for stdin");
    app.add_option("--output", cfg.output, "Output path, - for stdout");
    app.add_flag("--lenient", cfg.lenient, "Treat unparsable lines as message-only entries");
    app.add_option("--workers", cfg.workers, "Processing workers")->check(CLI::Range(1u, 256u));
    app.add_flag("--optimize-keys", cfg.optimize_keys,
                 "Re-fit key lengths by frequency after the stream; writes <table>.remap.csv");
    app.add_option("--gaps-csv", cfg.gaps_csv_path, "Write gap runs CSV (completeness mode)");
    app.add_option("--report", cfg.report_path, "Write the JSON report to this path");

    CLI11_PARSE(app, argc, argv);

    if (cfg.hash_bits % 8 != 0) {
        std::cerr << "--hash-bits must be a multiple of 8\n";
        return 2;
    }

    try {
        return run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << '\n';
        return 2;
    }
}
