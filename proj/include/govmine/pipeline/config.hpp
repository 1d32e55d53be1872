#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace govmine::pipeline {

struct ClassifierSettings {
    std::string kind = "baseline";  // "baseline" | "external"
    std::string endpoint;
    int max_in_flight = 4;
    int timeout_seconds = 60;
    /// Pretrained baseline model; when unset the baseline is trained on gold data.
    std::optional<std::filesystem::path> model;
};

/// Every tunable of a run. Paper constants live here as defaults.
struct RunConfig {
    // [paths]; relative paths resolve against the config file's directory.
    std::filesystem::path corpus_root = "corpus";
    std::filesystem::path output_dir = "out";
    std::filesystem::path manifest;  // default <corpus_root>/projects.csv
    std::filesystem::path roster;    // default <corpus_root>/roster.csv if present
    std::filesystem::path aliases;   // default <corpus_root>/aliases.csv if present
    std::filesystem::path gold;      // default <corpus_root>/gold.jsonl if present
    std::filesystem::path policies;  // optional policy texts
    std::filesystem::path bot_rules;   // optional override of the bundled rules
    std::filesystem::path extensions;  // optional override of the bundled whitelist

    // [run]
    std::uint64_t seed = 1;
    int jobs = 0;  // 0 = number of processors

    // [ingest]
    int window_margin_months = 1;
    int thread_window_days = 30;

    // [is]
    int token_budget = 256;
    double holdout_fraction = 0.125;
    double threshold = 0.5;
    ClassifierSettings classifier;

    // [topics]
    std::vector<int> lda_grid{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
    int lda_seeds = 3;
    int lda_iterations = 1000;
    std::optional<double> lda_alpha;  // 50/K when unset
    double lda_beta = 0.01;
    std::optional<int> lda_k;  // fixed K skips selection
    int horizon_months = 24;
    std::size_t min_count = 5;
    std::size_t min_token_length = 3;
    double max_doc_fraction = 0.5;
    std::map<int, std::string> topic_labels;

    // [stats]
    double trim_fraction = 0.02;
    int granger_lag = 2;
    double significance = 0.01;
    double adf_alpha = 0.05;
    std::string nonstationary = "exclude";  // "exclude" | "difference"
    bool small_sample = false;
    std::vector<std::string> st_variables{"s_num_nodes",     "s_graph_density",  "s_weighted_mean_degree",
                                          "t_num_dev_nodes", "t_num_file_nodes", "t_num_file_per_dev"};
    std::vector<std::string> is_variables{"num_IS_mentor", "num_IS_committer", "num_IS_contributor"};

    /// Throws ConfigError when a value is out of range.
    void validate() const;

    std::filesystem::path manifest_path() const;
    std::optional<std::filesystem::path> roster_path() const;
    std::optional<std::filesystem::path> aliases_path() const;
    std::optional<std::filesystem::path> gold_path() const;

    /// Analysis parameters only: paths and the worker count do not change
    /// results and are left out.
    nlohmann::json analysis_json() const;
    nlohmann::json to_json() const;
    /// First 16 hex digits of SHA-256 over analysis_json().
    std::string hash() const;
};

RunConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace govmine::pipeline
