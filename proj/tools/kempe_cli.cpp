// Command-line front end: exact chromatic indices, clique-removal
// verification, batch runs with resume, the coloring-extension engine, and
// family generation.
//
// Exit codes: 0 success, 1 usage or input error, 2 counterexample candidate
// found, 3 solver budget exceeded.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kempe/batch.hpp"
#include "kempe/extension.hpp"
#include "kempe/generate.hpp"
#include "kempe/io.hpp"
#include "kempe/json_io.hpp"
#include "kempe/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCandidate = 2;
constexpr int kExitBudget = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open `" + path + "`");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

kempe::Multigraph load_graph(const std::string& path) {
    return kempe::parse_edge_list(read_file(path));
}

std::vector<kempe::SplitStrategy> parse_strategies(const std::string& text) {
    std::vector<kempe::SplitStrategy> out;
    std::istringstream in(text);
    std::string name;
    while (std::getline(in, name, ',')) {
        if (name == "spread")
            out.push_back(kempe::SplitStrategy::SpreadNeighbors);
        else if (name == "star")
            out.push_back(kempe::SplitStrategy::SingleStar);
        else if (name == "half")
            out.push_back(kempe::SplitStrategy::HalfFill);
        else
            throw std::runtime_error("unknown strategy `" + name +
                                     "` (expected spread, star, half)");
    }
    if (out.empty()) throw std::runtime_error("empty strategy list");
    return out;
}

void print_report(const kempe::VerificationReport& r) {
    std::cout << "(s,t)=(" << r.instance.s << "," << r.instance.t << ") ell=" << r.instance.ell
              << " -> " << kempe::verify_outcome_name(r.outcome);
    if (r.outcome == kempe::VerifyOutcome::Witness) {
        std::cout << " Q={";
        for (std::size_t i = 0; i < r.witness->edge_ids.size(); ++i)
            std::cout << (i ? "," : "") << r.witness->edge_ids[i];
        std::cout << "} chi_after=" << r.chi_after;
    }
    std::cout << " cliques=" << r.cliques_tested << " nodes=" << r.solver_nodes << " ms="
              << r.wall.count() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kempe: exact edge-coloring toolkit for small multigraphs"};
    app.require_subcommand(1);

    std::uint64_t budget = kempe::SolverOptions{}.node_budget;
    app.add_option("--budget", budget, "solver node budget")->capture_default_str();

    // chi-index
    auto* chi_cmd = app.add_subcommand("chi-index", "exact chromatic index of an edge list");
    std::string chi_file, chi_coloring_out;
    chi_cmd->add_option("file", chi_file, "edge-list file")->required();
    chi_cmd->add_option("--coloring", chi_coloring_out, "write the certificate coloring here");

    // omega-prime
    auto* omega_cmd = app.add_subcommand("omega-prime", "max of tau and max degree");
    std::string omega_file;
    omega_cmd->add_option("file", omega_file, "edge-list file")->required();

    // verify
    auto* verify_cmd =
        app.add_subcommand("verify", "search witness cliques for every admissible (s,t)");
    std::string verify_file;
    int verify_ell = 0;
    std::optional<int> verify_s, verify_t;
    verify_cmd->add_option("file", verify_file, "edge-list file")->required();
    verify_cmd->add_option("--ell", verify_ell, "surplus ell")->required();
    verify_cmd->add_option("--s", verify_s, "explicit s (with --t)");
    verify_cmd->add_option("--t", verify_t, "explicit t (with --s)");

    // batch
    auto* batch_cmd = app.add_subcommand("batch", "verify a graph family, writing JSONL reports");
    std::string batch_family, batch_out, batch_checkpoint;
    std::vector<int> batch_ells;
    bool batch_resume = false;
    int batch_workers = 0;
    std::uint64_t batch_limit = 0;
    batch_cmd->add_option("--family", batch_family, "family spec, e.g. enumerate:4,6,2")
        ->required();
    batch_cmd->add_option("--ell", batch_ells, "surplus values (repeatable)")->required();
    batch_cmd->add_option("--out", batch_out, "JSONL output path")->required();
    batch_cmd->add_option("--checkpoint", batch_checkpoint, "checkpoint path (default out+.ckpt)");
    batch_cmd->add_flag("--resume", batch_resume, "continue from the checkpoint");
    batch_cmd->add_option("--workers", batch_workers, "worker threads (default KEMPE_WORKERS or 1)");
    batch_cmd->add_option("--limit", batch_limit, "stop after this many graphs");

    // extend
    auto* extend_cmd = app.add_subcommand("extend", "run the coloring-extension engine");
    std::string extend_file, extend_strategy = "spread,star,half";
    int extend_s = 0, extend_t = 0, extend_ell = 0;
    extend_cmd->add_option("file", extend_file, "edge-list file")->required();
    extend_cmd->add_option("--s", extend_s, "clique size s")->required();
    extend_cmd->add_option("--t", extend_t, "t")->required();
    extend_cmd->add_option("--ell", extend_ell, "surplus ell")->required();
    extend_cmd->add_option("--strategy", extend_strategy, "split-strategy order")
        ->capture_default_str();

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "write a family as edge-list files");
    std::string gen_family, gen_out;
    gen_cmd->add_option("--family", gen_family, "family spec")->required();
    gen_cmd->add_option("--out", gen_out, "output directory")->required();

    // probe-f
    auto* probe_cmd =
        app.add_subcommand("probe-f", "least bound b so that all pairs s,t >= b have witnesses");
    std::string probe_file;
    int probe_ell = 0;
    probe_cmd->add_option("file", probe_file, "edge-list file")->required();
    probe_cmd->add_option("--ell", probe_ell, "surplus ell")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    kempe::SolverOptions solver;
    solver.node_budget = budget;

    try {
        if (*chi_cmd) {
            kempe::Multigraph g = load_graph(chi_file);
            kempe::ChiResult chi = kempe::chromatic_index(g, solver);
            if (chi.status == kempe::SolveStatus::BudgetExceeded) {
                std::cerr << "budget exceeded after " << chi.nodes << " nodes\n";
                return kExitBudget;
            }
            std::cout << chi.value << "\n";
            if (!chi_coloring_out.empty()) {
                std::ofstream out(chi_coloring_out);
                out << kempe::serialize_coloring(*chi.coloring, chi.value);
            }
            return kExitOk;
        }
        if (*omega_cmd) {
            std::cout << load_graph(omega_file).stats().omega_prime << "\n";
            return kExitOk;
        }
        if (*verify_cmd) {
            kempe::Multigraph g = load_graph(verify_file);
            kempe::ChiDecisionCache cache;
            std::vector<kempe::VerificationReport> reports;
            if (verify_s || verify_t) {
                if (!verify_s || !verify_t) {
                    std::cerr << "--s and --t must be given together\n";
                    return kExitUsage;
                }
                auto inst = kempe::make_verification_instance(g, *verify_s, *verify_t,
                                                              verify_ell, std::nullopt, solver);
                reports.push_back(kempe::verify_instance(inst, solver, &cache));
            } else {
                auto all = kempe::verify_all_st(g, verify_ell, solver, &cache);
                if (!all.hypothesis_holds) {
                    std::cout << "hypothesis not met: chi'=" << all.chi_prime
                              << " <= omega'=" << all.omega_prime << "\n";
                    return kExitOk;
                }
                std::cout << "chi'=" << all.chi_prime << " omega'=" << all.omega_prime << "\n";
                reports = std::move(all.reports);
                if (reports.empty()) std::cout << "no admissible (s,t) pairs at ell=" << verify_ell << "\n";
            }
            int exit_code = kExitOk;
            for (const auto& r : reports) {
                print_report(r);
                if (r.outcome == kempe::VerifyOutcome::CounterexampleCandidate) {
                    std::cerr << r.diagnostics << "\n";
                    exit_code = kExitCandidate;
                } else if (r.outcome == kempe::VerifyOutcome::BudgetExceeded &&
                           exit_code == kExitOk) {
                    exit_code = kExitBudget;
                }
            }
            return exit_code;
        }
        if (*batch_cmd) {
            kempe::BatchOptions options;
            options.ells = batch_ells;
            options.out = batch_out;
            if (!batch_checkpoint.empty()) options.checkpoint = batch_checkpoint;
            options.resume = batch_resume;
            options.workers = batch_workers;
            options.limit_graphs = batch_limit;
            options.solver = solver;
            kempe::GraphStream stream = kempe::generate(kempe::parse_family(batch_family));
            kempe::BatchSummary summary = kempe::batch_verify(stream, options);
            std::cout << "graphs_seen=" << summary.graphs_seen
                      << " hypothesis_holds=" << summary.hypothesis_holds
                      << " witnesses=" << summary.witnesses
                      << " counterexample_candidates=" << summary.counterexample_candidates
                      << " budget_exceeded=" << summary.budget_exceeded << "\n";
            if (summary.counterexample_candidates > 0) return kExitCandidate;
            if (summary.budget_exceeded > 0) return kExitBudget;
            return kExitOk;
        }
        if (*extend_cmd) {
            kempe::Multigraph g = load_graph(extend_file);
            kempe::ExtensionOptions options;
            options.strategy_order = parse_strategies(extend_strategy);
            options.solver = solver;
            kempe::ExtensionOutcome outcome =
                kempe::attempt_extension(g, extend_s, extend_t, extend_ell, options);
            std::cout << kempe::extension_json(outcome).dump(2) << "\n";
            return kExitOk;
        }
        if (*gen_cmd) {
            kempe::FamilySpec spec = kempe::parse_family(gen_family);
            std::filesystem::create_directories(gen_out);
            kempe::GraphStream stream = kempe::generate(spec);
            int count = 0;
            while (auto g = stream.next()) {
                std::ostringstream name;
                name << kempe::family_name(spec) << "_" << count << ".el";
                std::ofstream out(std::filesystem::path(gen_out) / name.str());
                out << kempe::serialize(*g);
                ++count;
            }
            std::cout << "wrote " << count << " graphs to " << gen_out << "\n";
            return kExitOk;
        }
        if (*probe_cmd) {
            kempe::Multigraph g = load_graph(probe_file);
            kempe::ChiDecisionCache cache;
            kempe::ProbeResult probe = kempe::probe_f(g, probe_ell, solver, &cache);
            switch (probe.status) {
                case kempe::ProbeResult::Status::Value:
                    std::cout << probe.bound << "\n";
                    return kExitOk;
                case kempe::ProbeResult::Status::None:
                    std::cout << "none\n";
                    return kExitOk;
                case kempe::ProbeResult::Status::BudgetExceeded:
                    std::cerr << "budget exceeded\n";
                    return kExitBudget;
            }
        }
    } catch (const kempe::SolverBudgetExceeded& e) {
        std::cerr << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
