// govmine: socio-technical and institutional analysis of open-source incubator projects.

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "govmine/core/error.hpp"
#include "govmine/pipeline/commands.hpp"
#include "govmine/pipeline/config.hpp"
#include "govmine/pipeline/simulate.hpp"

namespace fs = std::filesystem;
using namespace govmine;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitTransport = 3;

struct GlobalOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::string output_dir;
    bool verbose = false;
};

pipeline::RunConfig make_config(const GlobalOptions& g) {
    pipeline::RunConfig c = g.config.empty() ? pipeline::RunConfig{} : pipeline::load_config(g.config);
    if (g.seed) c.seed = *g.seed;
    if (g.jobs) c.jobs = *g.jobs;
    if (!g.output_dir.empty()) c.output_dir = g.output_dir;
    return c;
}

/// Innermost error of a nested chain.
const std::exception* innermost(const std::exception& e, int depth = 0) {
    try {
        std::rethrow_if_nested(e);
    } catch (const std::exception& inner) {
        return depth < 8 ? innermost(inner, depth + 1) : &inner;
    } catch (...) {
    }
    return &e;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"govmine: mailing-list and commit mining for incubator sustainability studies"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--config", g.config, "TOML configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "Override the configured seed");
    app.add_option("--jobs", g.jobs, "Worker threads (0 = number of processors)")->check(CLI::NonNegativeNumber);
    app.add_option("--output-dir", g.output_dir, "Override the configured output directory");
    app.add_flag("-v,--verbose", g.verbose, "Log progress");

    auto* ingest = app.add_subcommand("ingest", "Normalize mbox archives and commit logs");
    auto* analyze = app.add_subcommand("analyze", "Networks, institutional statements, topics and statistics");
    auto* report = app.add_subcommand("report", "Write report.md from the analyze outputs");

    auto* convert = app.add_subcommand("convert-gitlog", "Convert `git log --name-only --date=iso-strict` output");
    std::string convert_in = "-", convert_out = "-";
    convert->add_option("input", convert_in, "git log output ('-' for stdin)");
    convert->add_option("output", convert_out, "commits.jsonl ('-' for stdout)");

    auto* eval = app.add_subcommand("eval-classifier", "Evaluate the IS classifier on held-out data");
    std::optional<std::size_t> synthetic;
    eval->add_option("--synthetic", synthetic, "Use a seeded synthetic corpus with this many sentences");

    auto* simulate = app.add_subcommand("simulate", "Write a synthetic multi-project corpus");
    std::string sim_dir;
    int sim_projects = 3;
    simulate->add_option("dir", sim_dir, "Output directory")->required();
    simulate->add_option("--projects", sim_projects, "Number of projects (1-6)");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(g.verbose ? spdlog::level::info : spdlog::level::warn);

    try {
        if (*ingest) {
            const auto s = pipeline::cmd_ingest(make_config(g));
            std::cout << s.projects << " projects, " << s.emails_retained << " emails retained, " << s.emails_bot
                      << " bot emails (ratio " << s.email_bot_ratio << "), " << s.commits_retained
                      << " commits retained\n";
        } else if (*analyze) {
            pipeline::cmd_analyze(make_config(g));
        } else if (*report) {
            pipeline::cmd_report(make_config(g));
        } else if (*convert) {
            std::ifstream fin;
            std::ofstream fout;
            if (convert_in != "-") {
                fin.open(convert_in, std::ios::binary);
                if (!fin) throw Error("cannot read " + convert_in);
            }
            if (convert_out != "-") {
                fout.open(convert_out, std::ios::binary);
                if (!fout) throw Error("cannot write " + convert_out);
            }
            const auto n = pipeline::cmd_convert_gitlog(convert_in == "-" ? std::cin : fin,
                                                        convert_out == "-" ? std::cout : fout);
            std::cerr << n << " commits converted\n";
        } else if (*eval) {
            const auto r = pipeline::cmd_eval_classifier(make_config(g), synthetic);
            auto j = r.report.to_json();
            j["source"] = r.source;
            j["train_sentences"] = r.train_sentences;
            j["test_sentences"] = r.test_sentences;
            std::cout << j.dump(2) << '\n';
        } else if (*simulate) {
            pipeline::SimulationOptions opts;
            if (g.seed) opts.seed = *g.seed;
            opts.projects = sim_projects;
            const auto s = pipeline::simulate_corpus(sim_dir, opts);
            std::cout << s.emails << " emails (" << s.bot_emails << " bot), " << s.commits << " commits, "
                      << s.gold_sentences << " gold sentences\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        const auto* root = innermost(e);
        if (root != &e && std::string_view(root->what()) != e.what()) std::cerr << "cause: " << root->what() << '\n';
        return dynamic_cast<const TransportError*>(root) ? kExitTransport : kExitFailure;
    }
    return 0;
}
