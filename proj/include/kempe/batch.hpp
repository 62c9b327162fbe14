#pragma once

// Batch verification: fans graphs out to a worker pool, filters to the
// chi' > omega' hypothesis, runs every admissible (s, t) pair per requested
// ell, and writes one JSONL record per report. Resumable: a checkpoint file
// lists the canonical keys of completed graphs, and --resume drops orphan
// records from an interrupted run before continuing, so an interrupted plus
// resumed run produces the same record set as an uninterrupted one.

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "kempe/generate.hpp"
#include "kempe/json_io.hpp"
#include "kempe/verify.hpp"

namespace kempe {

struct BatchSummary {
    std::uint64_t graphs_seen = 0;
    std::uint64_t hypothesis_holds = 0;
    std::uint64_t witnesses = 0;
    std::uint64_t counterexample_candidates = 0;
    std::uint64_t budget_exceeded = 0;
};

struct BatchOptions {
    std::vector<int> ells{0};
    std::filesystem::path out;
    std::optional<std::filesystem::path> checkpoint;  // default: out + ".ckpt"
    bool resume = false;
    int workers = 0;               // 0: KEMPE_WORKERS env var, else 1
    std::uint64_t limit_graphs = 0;  // 0: no limit; counts processed graphs
    SolverOptions solver;
};

namespace detail {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("KEMPE_WORKERS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

inline std::set<std::string> load_checkpoint(const std::filesystem::path& path) {
    std::set<std::string> done;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) done.insert(line);
    return done;
}

// Keeps only records of checkpointed graphs, dropping whatever an
// interrupted run wrote past its last checkpoint.
inline void compact_output(const std::filesystem::path& out,
                           const std::set<std::string>& done) {
    if (!std::filesystem::exists(out)) return;
    std::vector<std::string> keep;
    {
        std::ifstream in(out);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto rec = nlohmann::json::parse(line, nullptr, false);
            if (rec.is_discarded() || !rec.contains("graph_key")) continue;
            if (done.count(rec["graph_key"].get<std::string>())) keep.push_back(line);
        }
    }
    std::ofstream rewrite(out, std::ios::trunc);
    for (const std::string& line : keep) rewrite << line << "\n";
}

}  // namespace detail

inline BatchSummary batch_verify(GraphStream& source, const BatchOptions& options) {
    if (options.out.empty()) throw std::invalid_argument("batch output path required");
    const std::filesystem::path ckpt_path =
        options.checkpoint ? *options.checkpoint
                           : std::filesystem::path(options.out.string() + ".ckpt");

    BatchSummary summary;
    std::set<std::string> done;
    if (options.resume) {
        done = detail::load_checkpoint(ckpt_path);
        detail::compact_output(options.out, done);
    } else {
        std::ofstream(options.out, std::ios::trunc);
        std::ofstream(ckpt_path, std::ios::trunc);
    }

    struct Job {
        Multigraph graph;
        std::string key;
    };
    std::vector<Job> jobs;
    while (auto g = source.next()) {
        ++summary.graphs_seen;
        std::string key = g->canonical_key();
        if (done.count(to_hex(key))) continue;
        jobs.push_back({std::move(*g), to_hex(key)});
        if (options.limit_graphs > 0 && jobs.size() >= options.limit_graphs) break;
    }

    std::ofstream out_file(options.out, std::ios::app);
    std::ofstream ckpt_file(ckpt_path, std::ios::app);
    std::mutex sink_mutex;
    std::atomic<std::size_t> next_job{0};
    const int workers = detail::resolve_workers(options.workers);

    auto work = [&]() {
        while (true) {
            std::size_t idx = next_job.fetch_add(1);
            if (idx >= jobs.size()) return;
            const Job& job = jobs[idx];
            std::vector<nlohmann::json> records;
            std::vector<std::string> diagnostics;
            bool hypothesis = false;
            std::uint64_t wit = 0, cand = 0, budget = 0;
            try {
                ChiDecisionCache cache;
                bool first = true;
                for (int ell : options.ells) {
                    VerifyAllResult result =
                        verify_all_st(job.graph, ell, options.solver, &cache);
                    if (first) {
                        hypothesis = result.hypothesis_holds;
                        first = false;
                    }
                    for (const VerificationReport& report : result.reports) {
                        records.push_back(report_record(report, job.key));
                        switch (report.outcome) {
                            case VerifyOutcome::Witness: ++wit; break;
                            case VerifyOutcome::CounterexampleCandidate:
                                ++cand;
                                diagnostics.push_back(report.diagnostics);
                                break;
                            case VerifyOutcome::BudgetExceeded: ++budget; break;
                        }
                    }
                }
            } catch (const SolverBudgetExceeded&) {
                ++budget;
            }
            std::lock_guard<std::mutex> lock(sink_mutex);
            for (const auto& rec : records) out_file << rec.dump() << "\n";
            out_file.flush();
            ckpt_file << job.key << "\n";
            ckpt_file.flush();
            if (hypothesis) ++summary.hypothesis_holds;
            summary.witnesses += wit;
            summary.counterexample_candidates += cand;
            summary.budget_exceeded += budget;
            for (const std::string& diag : diagnostics) std::cerr << diag << "\n";
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    out_file.close();
    ckpt_file.close();

    // Normalize the checkpoint: sorted, unique.
    std::set<std::string> all_done = detail::load_checkpoint(ckpt_path);
    std::ofstream rewrite(ckpt_path, std::ios::trunc);
    for (const std::string& key : all_done) rewrite << key << "\n";
    return summary;
}

}  // namespace kempe
