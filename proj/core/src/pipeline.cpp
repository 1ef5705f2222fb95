#include "logcleanse/pipeline.hpp"

#include <condition_variable>
#include <deque>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

namespace logcleanse {

namespace {

void emit(std::ostream& out, const ProcessedEntry& processed, bool emit_lines) {
    if (!emit_lines) return;
    out << processed.entry.timestamp << ' ' << processed.final_text << '\n';
}

PipelineResult run_serial(std::istream& in, std::ostream& out,
                          const std::vector<VariableClass>& classes, const PolicyTable& policy,
                          ReferenceTable* table, const PipelineConfig& config) {
    PipelineResult result;
    std::string line;
    while (std::getline(in, line)) {
        ProcessedEntry processed = process_line(line, classes, policy, table, config.hash_bits,
                                                config.lenient, config.encode);
        accumulate(result.report, processed);
        emit(out, processed, config.emit_lines);
        ++result.lines;
    }
    return result;
}

// Single reader, N workers, single order-restoring writer over a bounded
// work queue.
class ParallelRunner {
public:
    ParallelRunner(std::istream& in, std::ostream& out, const std::vector<VariableClass>& classes,
                   const PolicyTable& policy, ReferenceTable* table, const PipelineConfig& config)
        : in_(in), out_(out), classes_(classes), policy_(policy), table_(table), config_(config),
          queue_limit_(config.workers * 64) {}

    PipelineResult run() {
        std::vector<std::thread> workers;
        workers.reserve(config_.workers);
        std::vector<CorpusReport> reports(config_.workers);
        for (unsigned w = 0; w < config_.workers; ++w)
            workers.emplace_back([this, &reports, w] { work(reports[w]); });

        read_all();
        for (auto& t : workers) t.join();

        PipelineResult result;
        for (const auto& r : reports) merge(result.report, r);
        result.lines = next_seq_in_;
        flush_ready();  // everything is done; drain any tail
        return result;
    }

private:
    void read_all() {
        std::string line;
        while (std::getline(in_, line)) {
            std::unique_lock lock(mutex_);
            not_full_.wait(lock, [this] { return queue_.size() < queue_limit_; });
            queue_.emplace_back(next_seq_in_++, std::move(line));
            lock.unlock();
            not_empty_.notify_one();
        }
        {
            std::lock_guard lock(mutex_);
            done_reading_ = true;
        }
        not_empty_.notify_all();
    }

    void work(CorpusReport& report) {
        while (true) {
            std::pair<std::uint64_t, std::string> item;
            {
                std::unique_lock lock(mutex_);
                not_empty_.wait(lock, [this] { return !queue_.empty() || done_reading_; });
                if (queue_.empty()) return;
                item = std::move(queue_.front());
                queue_.pop_front();
            }
            not_full_.notify_one();

            ProcessedEntry processed = process_line(item.second, classes_, policy_, table_,
                                                    config_.hash_bits, config_.lenient,
                                                    config_.encode);
            processed.sequence = item.first;
            accumulate(report, processed);

            {
                std::lock_guard lock(write_mutex_);
                pending_.emplace(item.first, std::move(processed));
                flush_ready_locked();
            }
        }
    }

    void flush_ready() {
        std::lock_guard lock(write_mutex_);
        flush_ready_locked();
    }

    void flush_ready_locked() {
        for (auto it = pending_.begin(); it != pending_.end() && it->first == next_seq_out_;
             it = pending_.erase(it), ++next_seq_out_)
            emit(out_, it->second, config_.emit_lines);
    }

    std::istream& in_;
    std::ostream& out_;
    const std::vector<VariableClass>& classes_;
    const PolicyTable& policy_;
    ReferenceTable* table_;
    const PipelineConfig& config_;

    std::mutex mutex_;
    std::condition_variable not_empty_, not_full_;
    std::deque<std::pair<std::uint64_t, std::string>> queue_;
    const std::size_t queue_limit_;
    bool done_reading_ = false;
    std::uint64_t next_seq_in_ = 0;

    std::mutex write_mutex_;
    std::map<std::uint64_t, ProcessedEntry> pending_;
    std::uint64_t next_seq_out_ = 0;
};

}  // namespace

PipelineResult run_pipeline(std::istream& in, std::ostream& out,
                            const std::vector<VariableClass>& classes, const PolicyTable& policy,
                            ReferenceTable* table, const PipelineConfig& config) {
    if (config.workers <= 1) return run_serial(in, out, classes, policy, table, config);
    ParallelRunner runner(in, out, classes, policy, table, config);
    return runner.run();
}

}  // namespace logcleanse
