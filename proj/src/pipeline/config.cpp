#include "govmine/pipeline/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <toml.hpp>

#include "govmine/core/digest.hpp"
#include "govmine/core/error.hpp"
#include "govmine/stnet/panel.hpp"

namespace govmine::pipeline {

namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& base, const fs::path& p) {
    if (p.empty() || p.is_absolute()) return p;
    return (base / p).lexically_normal();
}

std::optional<fs::path> existing(const fs::path& explicit_path, const fs::path& fallback) {
    if (!explicit_path.empty()) return explicit_path;
    if (fs::exists(fallback)) return fallback;
    return std::nullopt;
}

template <typename T>
void read(const toml::table& t, std::string_view section, std::string_view key, T& out) {
    const auto node = t[section][key];
    if (!node) return;
    if constexpr (std::is_same_v<T, bool>) {
        if (auto v = node.value<bool>()) out = *v;
        else throw ConfigError(std::string(section) + "." + std::string(key) + " must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
        if (auto v = node.value<std::int64_t>()) out = static_cast<T>(*v);
        else throw ConfigError(std::string(section) + "." + std::string(key) + " must be an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
        if (auto v = node.value<double>()) out = *v;
        else throw ConfigError(std::string(section) + "." + std::string(key) + " must be a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (auto v = node.value<std::string>()) out = *v;
        else throw ConfigError(std::string(section) + "." + std::string(key) + " must be a string");
    } else if constexpr (std::is_same_v<T, fs::path>) {
        if (auto v = node.value<std::string>()) out = *v;
        else throw ConfigError(std::string(section) + "." + std::string(key) + " must be a path string");
    }
}

template <typename T>
void read_optional(const toml::table& t, std::string_view section, std::string_view key, std::optional<T>& out) {
    if (!t[section][key]) return;
    T v{};
    read(t, section, key, v);
    out = v;
}

template <typename T>
void read_list(const toml::table& t, std::string_view section, std::string_view key, std::vector<T>& out) {
    const auto node = t[section][key];
    if (!node) return;
    const auto* arr = node.as_array();
    if (!arr) throw ConfigError(std::string(section) + "." + std::string(key) + " must be an array");
    out.clear();
    for (const auto& el : *arr) {
        if constexpr (std::is_integral_v<T>) {
            auto v = el.template value<std::int64_t>();
            if (!v) throw ConfigError(std::string(section) + "." + std::string(key) + " must hold integers");
            out.push_back(static_cast<T>(*v));
        } else {
            auto v = el.template value<std::string>();
            if (!v) throw ConfigError(std::string(section) + "." + std::string(key) + " must hold strings");
            out.push_back(*v);
        }
    }
}

}  // namespace

RunConfig parse_config(std::string_view toml_text, const fs::path& base_dir) {
    toml::table t;
    try {
        t = toml::parse(toml_text);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "config parse error: " << e.description() << " at line " << e.source().begin.line;
        throw ConfigError(msg.str());
    }
    RunConfig c;
    read(t, "paths", "corpus_root", c.corpus_root);
    read(t, "paths", "output_dir", c.output_dir);
    read(t, "paths", "manifest", c.manifest);
    read(t, "paths", "roster", c.roster);
    read(t, "paths", "aliases", c.aliases);
    read(t, "paths", "gold", c.gold);
    read(t, "paths", "policies", c.policies);
    read(t, "paths", "bot_rules", c.bot_rules);
    read(t, "paths", "extensions", c.extensions);
    for (auto* p : {&c.corpus_root, &c.output_dir, &c.manifest, &c.roster, &c.aliases, &c.gold, &c.policies,
                    &c.bot_rules, &c.extensions})
        *p = resolve(base_dir, *p);

    read(t, "run", "seed", c.seed);
    read(t, "run", "jobs", c.jobs);
    read(t, "ingest", "window_margin_months", c.window_margin_months);
    read(t, "ingest", "thread_window_days", c.thread_window_days);
    read(t, "is", "token_budget", c.token_budget);
    read(t, "is", "holdout_fraction", c.holdout_fraction);
    read(t, "is", "threshold", c.threshold);
    read(t, "classifier", "kind", c.classifier.kind);
    read(t, "classifier", "endpoint", c.classifier.endpoint);
    read(t, "classifier", "max_in_flight", c.classifier.max_in_flight);
    read(t, "classifier", "timeout_seconds", c.classifier.timeout_seconds);
    if (t["classifier"]["model"]) {
        fs::path model;
        read(t, "classifier", "model", model);
        c.classifier.model = resolve(base_dir, model);
    }
    read_list(t, "topics", "grid", c.lda_grid);
    read(t, "topics", "seeds", c.lda_seeds);
    read(t, "topics", "iterations", c.lda_iterations);
    read_optional(t, "topics", "alpha", c.lda_alpha);
    read(t, "topics", "beta", c.lda_beta);
    read_optional(t, "topics", "k", c.lda_k);
    read(t, "topics", "horizon_months", c.horizon_months);
    read(t, "topics", "min_count", c.min_count);
    read(t, "topics", "min_token_length", c.min_token_length);
    read(t, "topics", "max_doc_fraction", c.max_doc_fraction);
    if (const auto* labels = t["topics"]["labels"].as_table()) {
        for (const auto& [k, v] : *labels) {
            auto s = v.value<std::string>();
            if (!s) throw ConfigError("topics.labels values must be strings");
            try {
                c.topic_labels[std::stoi(std::string(k.str()))] = *s;
            } catch (const std::exception&) {
                throw ConfigError("topics.labels keys must be topic ids");
            }
        }
    }
    read(t, "stats", "trim_fraction", c.trim_fraction);
    read(t, "stats", "granger_lag", c.granger_lag);
    read(t, "stats", "significance", c.significance);
    read(t, "stats", "adf_alpha", c.adf_alpha);
    read(t, "stats", "nonstationary", c.nonstationary);
    read(t, "stats", "small_sample", c.small_sample);
    read_list(t, "stats", "st_variables", c.st_variables);
    read_list(t, "stats", "is_variables", c.is_variables);
    c.validate();
    return c;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path().empty() ? fs::current_path() : fs::absolute(path.parent_path()));
}

void RunConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("invalid config: " + what);
    };
    require(token_budget >= 1, "is.token_budget must be >= 1");
    require(holdout_fraction > 0 && holdout_fraction < 1, "is.holdout_fraction must lie in (0, 1)");
    require(threshold > 0 && threshold < 1, "is.threshold must lie in (0, 1)");
    require(classifier.kind == "baseline" || classifier.kind == "external",
            "classifier.kind must be 'baseline' or 'external'");
    require(classifier.kind != "external" || !classifier.endpoint.empty(),
            "classifier.endpoint is required for the external classifier");
    require(classifier.max_in_flight >= 1, "classifier.max_in_flight must be >= 1");
    require(classifier.timeout_seconds >= 1, "classifier.timeout_seconds must be >= 1");
    require(!lda_grid.empty(), "topics.grid must not be empty");
    for (int k : lda_grid) require(k >= 2, "topics.grid values must be >= 2");
    require(!lda_k || *lda_k >= 2, "topics.k must be >= 2");
    require(lda_seeds >= 1, "topics.seeds must be >= 1");
    require(lda_iterations >= 1, "topics.iterations must be >= 1");
    require(!lda_alpha || *lda_alpha > 0, "topics.alpha must be > 0");
    require(lda_beta > 0, "topics.beta must be > 0");
    require(horizon_months >= 1, "topics.horizon_months must be >= 1");
    require(max_doc_fraction > 0 && max_doc_fraction <= 1, "topics.max_doc_fraction must lie in (0, 1]");
    require(trim_fraction > 0 && trim_fraction < 0.5, "stats.trim_fraction must lie in (0, 0.5)");
    require(granger_lag >= 1, "stats.granger_lag must be >= 1");
    require(significance > 0 && significance < 1, "stats.significance must lie in (0, 1)");
    require(adf_alpha > 0 && adf_alpha < 1, "stats.adf_alpha must lie in (0, 1)");
    require(nonstationary == "exclude" || nonstationary == "difference",
            "stats.nonstationary must be 'exclude' or 'difference'");
    require(window_margin_months >= 0, "ingest.window_margin_months must be >= 0");
    require(thread_window_days >= 0, "ingest.thread_window_days must be >= 0");
    const auto vars = stnet::panel_variables();
    for (const auto* list : {&st_variables, &is_variables}) {
        require(!list->empty(), "stats variable lists must not be empty");
        for (const auto& v : *list)
            require(std::find(vars.begin(), vars.end(), v) != vars.end(), "unknown panel variable '" + v + "'");
    }
}

fs::path RunConfig::manifest_path() const { return manifest.empty() ? corpus_root / "projects.csv" : manifest; }
std::optional<fs::path> RunConfig::roster_path() const { return existing(roster, corpus_root / "roster.csv"); }
std::optional<fs::path> RunConfig::aliases_path() const { return existing(aliases, corpus_root / "aliases.csv"); }
std::optional<fs::path> RunConfig::gold_path() const { return existing(gold, corpus_root / "gold.jsonl"); }

nlohmann::json RunConfig::analysis_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["ingest"] = {{"window_margin_months", window_margin_months}, {"thread_window_days", thread_window_days}};
    j["is"] = {{"token_budget", token_budget},
               {"holdout_fraction", holdout_fraction},
               {"threshold", threshold},
               {"classifier", classifier.kind},
               {"endpoint", classifier.kind == "external" ? classifier.endpoint : ""}};
    j["topics"] = {{"grid", lda_grid},
                   {"seeds", lda_seeds},
                   {"iterations", lda_iterations},
                   {"alpha", lda_alpha ? nlohmann::json(*lda_alpha) : nlohmann::json("50/K")},
                   {"beta", lda_beta},
                   {"k", lda_k ? nlohmann::json(*lda_k) : nlohmann::json(nullptr)},
                   {"horizon_months", horizon_months},
                   {"min_count", min_count},
                   {"min_token_length", min_token_length},
                   {"max_doc_fraction", max_doc_fraction}};
    j["stats"] = {{"trim_fraction", trim_fraction}, {"granger_lag", granger_lag},   {"significance", significance},
                  {"adf_alpha", adf_alpha},         {"nonstationary", nonstationary}, {"small_sample", small_sample},
                  {"st_variables", st_variables},   {"is_variables", is_variables}};
    return j;
}

nlohmann::json RunConfig::to_json() const {
    auto j = analysis_json();
    j["paths"] = {{"corpus_root", corpus_root.string()}, {"output_dir", output_dir.string()},
                  {"manifest", manifest_path().string()}};
    j["jobs"] = jobs;
    return j;
}

std::string RunConfig::hash() const { return sha256_hex(analysis_json().dump()).substr(0, 16); }

}  // namespace govmine::pipeline
