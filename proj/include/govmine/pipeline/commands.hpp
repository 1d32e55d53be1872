#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "govmine/institutional/evaluation.hpp"
#include "govmine/pipeline/config.hpp"

namespace govmine::pipeline {

/// Fixed layout under output_dir.
namespace layout {
inline constexpr const char* kCorpusDir = "corpus";
inline constexpr const char* kIngestStats = "corpus/ingest_stats.json";
inline constexpr const char* kMetrics = "metrics.csv";
inline constexpr const char* kIsEval = "is/eval.json";
inline constexpr const char* kIsPredictions = "is/predictions.jsonl";
inline constexpr const char* kIsModel = "is/model.json";
inline constexpr const char* kTopics = "topics/topics.json";
inline constexpr const char* kTopicVolumes = "topics/topic_volumes.csv";
inline constexpr const char* kGranger = "stats/granger.csv";
inline constexpr const char* kStationarity = "stats/stationarity.csv";
inline constexpr const char* kGroupTests = "stats/group_tests.csv";
inline constexpr const char* kGroupMeansPlot = "plots/group_means.svg";
inline constexpr const char* kTopicEvolutionPlot = "plots/topic_evolution.svg";
inline constexpr const char* kReport = "report.md";
inline constexpr const char* kRunManifest = "run_manifest.json";
}  // namespace layout

/// Artifacts produced by analyze, relative to output_dir.
std::vector<std::string> analyze_artifacts(const RunConfig& config);

/// "govmine config_hash=<hash> seed=<seed>" provenance lines; CSV writers prefix them with "# ".
std::vector<std::string> artifact_preamble(const RunConfig& config);

struct IngestSummary {
    std::size_t projects = 0;
    std::size_t emails_retained = 0;
    std::size_t emails_bot = 0;
    std::size_t commits_retained = 0;
    double email_bot_ratio = 0;
};

/// Reads the manifest and mboxes under corpus_root and writes
/// `<output_dir>/corpus/<project>/{emails,commits}.jsonl` plus ingest_stats.json.
/// Throws IngestError when corpus_root or the manifest is missing.
IngestSummary cmd_ingest(const RunConfig& config);

/// Networks, IS detection, topics, statistics and plots from the ingest
/// outputs. Runs in a staging directory; on failure the staging directory is
/// removed and a StageError naming the stage is thrown with the original
/// error nested (std::rethrow_if_nested recovers it).
void cmd_analyze(const RunConfig& config);

/// Writes report.md from the analyze outputs. Throws Error naming the path of
/// a missing upstream artifact.
void cmd_report(const RunConfig& config);

struct ClassifierEvaluation {
    institutional::EvalReport report;
    std::size_t train_sentences = 0;
    std::size_t test_sentences = 0;
    std::string source;  // "gold" | "synthetic"
};

/// Trains the baseline (or queries the external service) and evaluates it on
/// a held-out split: thread-level over gold annotations, or, with
/// `synthetic_sentences`, on an independently seeded synthetic corpus.
ClassifierEvaluation cmd_eval_classifier(const RunConfig& config,
                                         std::optional<std::size_t> synthetic_sentences = std::nullopt);

/// `git log --name-only --date=iso-strict` to commits.jsonl.
std::size_t cmd_convert_gitlog(std::istream& in, std::ostream& out);

}  // namespace govmine::pipeline
