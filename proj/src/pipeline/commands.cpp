#include "govmine/pipeline/commands.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "govmine/core/digest.hpp"
#include "govmine/core/error.hpp"
#include "govmine/core/parallel.hpp"
#include "govmine/core/text.hpp"
#include "govmine/ingest/commits.hpp"
#include "govmine/ingest/corpus.hpp"
#include "govmine/institutional/annotations.hpp"
#include "govmine/institutional/baseline.hpp"
#include "govmine/institutional/classifier.hpp"
#include "govmine/institutional/role_counts.hpp"
#include "govmine/institutional/segments.hpp"
#include "govmine/institutional/synthetic.hpp"
#include "govmine/institutional/tokenizer.hpp"
#include "govmine/pipeline/manifest.hpp"
#include "govmine/pipeline/svg.hpp"
#include "govmine/stats/panel_tests.hpp"
#include "govmine/stnet/metrics.hpp"
#include "govmine/stnet/networks.hpp"
#include "govmine/stnet/panel.hpp"
#include "govmine/topics/corpus.hpp"
#include "govmine/topics/lda.hpp"
#include "govmine/topics/volumes.hpp"

namespace govmine::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;
using ingest::Email;
using ingest::Outcome;

namespace {

constexpr const char* kStagingDir = ".analyze-staging";

struct ProjectData {
    ingest::ProjectManifest manifest;
    std::vector<Email> emails;
    std::vector<ingest::Commit> commits;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void require_artifact(const fs::path& path) {
    if (!fs::exists(path)) throw Error("missing upstream artifact: " + path.string());
}

json provenance(const RunConfig& config) { return {{"config_hash", config.hash()}, {"seed", config.seed}}; }

ingest::IdentityMap load_identities(const RunConfig& config) {
    ingest::IdentityMap map;
    if (auto p = config.roster_path()) map.load_roster_csv(*p);
    if (auto p = config.aliases_path()) map.load_alias_csv(*p);
    return map;
}

std::map<std::string, Outcome> groups_of(std::span<const ingest::ProjectManifest> manifests) {
    std::map<std::string, Outcome> out;
    for (const auto& m : manifests) out[m.project_id] = m.outcome;
    return out;
}

/// Last month index covered by the incubation period (end date inclusive).
int last_month(const ingest::ProjectManifest& m) {
    return month_index(make_timestamp(m.incubation_end, 23, 59, 59), m.start_time());
}

std::vector<ingest::ProjectManifest> load_projects(const RunConfig& config) {
    const auto path = config.manifest_path();
    if (!fs::exists(path)) throw IngestError("manifest file missing: " + path.string());
    return ingest::load_manifest(path);
}

std::vector<ProjectData> load_ingested(const RunConfig& config) {
    std::vector<ProjectData> out;
    for (auto& m : load_projects(config)) {
        const auto dir = config.output_dir / layout::kCorpusDir / m.project_id;
        require_artifact(dir / "emails.jsonl");
        require_artifact(dir / "commits.jsonl");
        ProjectData p;
        p.emails = ingest::read_emails_jsonl(dir / "emails.jsonl");
        p.commits = ingest::read_commits_jsonl(dir / "commits.jsonl");
        p.manifest = std::move(m);
        out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Institutional statements

using Predictions = institutional::SentencePredictions;

Predictions predict_emails(const institutional::ClassifierHandle& handle, std::span<const Email> emails,
                           int token_budget) {
    std::vector<institutional::Segment> segments;
    std::vector<std::pair<std::size_t, std::size_t>> ranges;  // per email [begin, end) into segments
    for (const auto& e : emails) {
        auto segs = institutional::segment_email(e.sentences, token_budget);
        ranges.emplace_back(segments.size(), segments.size() + segs.size());
        for (auto& s : segs) segments.push_back(std::move(s));
    }
    const auto labels = institutional::classify(handle, segments);
    Predictions out;
    for (std::size_t i = 0; i < emails.size(); ++i) {
        const auto [b, e] = ranges[i];
        out[emails[i].message_id] = institutional::aggregate_predictions(
            std::span(segments).subspan(b, e - b), std::span(labels).subspan(b, e - b), emails[i].sentences.size());
    }
    return out;
}

institutional::EvalReport evaluate_on(const institutional::ClassifierHandle& handle, std::span<const Email> emails,
                                      int token_budget, std::size_t* sentences = nullptr) {
    const auto predicted = predict_emails(handle, emails, token_budget);
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (const auto& e : emails) {
        const auto& pred = predicted.at(e.message_id);
        for (std::size_t k = 0; k < e.sentences.size(); ++k) {
            const bool g = e.sentences[k].gold_label.value_or(false);
            const bool p = pred[k];
            (g ? (p ? tp : fn) : (p ? fp : tn))++;
        }
    }
    if (sentences) *sentences = tp + fp + fn + tn;
    return institutional::evaluate_counts(tp, fp, fn, tn);
}

bool fully_labeled(const Email& e) {
    if (e.sentences.empty()) return false;
    for (const auto& s : e.sentences)
        if (!s.gold_label) return false;
    return true;
}

institutional::BaselineModel train_on(std::span<const Email> emails, const RunConfig& config) {
    std::vector<institutional::Segment> segments;
    for (const auto& e : emails)
        for (auto& s : institutional::segment_email(e.sentences, config.token_budget)) segments.push_back(std::move(s));
    if (!config.policies.empty()) {
        for (auto& s : institutional::policy_segments(read_file(config.policies))) segments.push_back(std::move(s));
    }
    const auto training = institutional::oversample_training(segments, config.seed);
    institutional::BaselineOptions options;
    options.threshold = config.threshold;
    return institutional::train_baseline(training, config.seed, options);
}

std::size_t sentence_count(std::span<const Email> emails) {
    std::size_t n = 0;
    for (const auto& e : emails) n += e.sentences.size();
    return n;
}

struct PreparedClassifier {
    institutional::ClassifierHandle handle;
    std::optional<institutional::EvalReport> eval;
    std::size_t train_sentences = 0;
    std::size_t test_sentences = 0;
    std::string model_hash;  // external only
};

institutional::ExternalClassifier external_client(const RunConfig& config) {
    institutional::ExternalConfig ec;
    ec.endpoint = config.classifier.endpoint;
    ec.max_in_flight = config.classifier.max_in_flight;
    ec.timeout = std::chrono::seconds(config.classifier.timeout_seconds);
    return institutional::ExternalClassifier(std::move(ec));
}

/// Emails must already carry token counts and gold labels.
PreparedClassifier prepare_classifier(std::span<const Email> emails, const RunConfig& config) {
    std::vector<Email> labeled;
    for (const auto& e : emails)
        if (fully_labeled(e)) labeled.push_back(e);

    PreparedClassifier out;
    std::vector<Email> train, test;
    if (!labeled.empty()) {
        const auto split = institutional::split_by_thread(labeled, config.holdout_fraction, config.seed);
        for (auto i : split.train) train.push_back(labeled[i]);
        for (auto i : split.test) test.push_back(labeled[i]);
    }

    if (config.classifier.kind == "external") {
        auto client = external_client(config);
        out.model_hash = client.health();
        out.handle = std::move(client);
    } else if (config.classifier.model) {
        out.handle = institutional::BaselineModel::load(*config.classifier.model);
        // A pretrained model may be evaluated on every labeled email.
        test = labeled;
        train.clear();
    } else {
        if (train.empty()) throw PreconditionError("no gold-labeled emails to train the baseline classifier");
        out.handle = train_on(train, config);
    }
    out.train_sentences = sentence_count(train);
    if (!test.empty()) out.eval = evaluate_on(out.handle, test, config.token_budget, &out.test_sentences);
    return out;
}

void assign_tokens(std::vector<Email>& emails, const RunConfig& config) {
    institutional::EstimateTokenizer estimate;
    for (auto& e : emails) institutional::assign_token_counts(e.sentences, estimate);
    if (config.classifier.kind != "external") return;
    auto client = external_client(config);
    institutional::ServiceTokenizer service(client);
    std::vector<std::string> texts;
    for (const auto& e : emails)
        for (const auto& s : e.sentences) texts.push_back(s.text);
    const auto counts = service.count_many(texts);
    std::size_t i = 0;
    for (auto& e : emails)
        for (auto& s : e.sentences) s.token_count = counts[i++];
}

// ---------------------------------------------------------------------------
// Plots

constexpr const char* kGraduatedColor = "#1f77b4";
constexpr const char* kRetiredColor = "#d62728";

std::string with_provenance(const RunConfig& config, const std::string& svg) {
    return fmt::format("<!-- govmine config_hash={} seed={} -->\n", config.hash(), config.seed) + svg;
}

PlotSeries group_mean_series(const stnet::PanelSeries& panel, const std::string& variable, Outcome group) {
    PlotSeries s;
    s.name = std::string(ingest::to_string(group));
    s.color = group == Outcome::Graduated ? kGraduatedColor : kRetiredColor;
    std::size_t horizon = 0;
    for (const auto& p : panel.projects)
        if (p.group == group) horizon = std::max(horizon, p.length());
    for (std::size_t m = 0; m < horizon; ++m) {
        std::vector<double> v;
        for (const auto& p : panel.projects) {
            if (p.group != group || m >= p.length() || !p.is_retained(variable, m)) continue;
            v.push_back(p.series(variable)[m]);
        }
        if (v.empty()) continue;
        const auto st = stnet::summarize(v);
        const double se = st.n > 1 ? st.sd / std::sqrt(static_cast<double>(st.n)) : 0.0;
        s.x.push_back(static_cast<double>(m));
        s.y.push_back(st.mean);
        s.lower.push_back(st.mean - se);
        s.upper.push_back(st.mean + se);
    }
    return s;
}

std::string group_means_svg(const stnet::PanelSeries& panel) {
    std::vector<LinePlot> plots;
    for (const auto& v : stnet::panel_variables()) {
        LinePlot plot{v, "month", "mean", {}};
        for (auto g : {Outcome::Graduated, Outcome::Retired}) {
            auto s = group_mean_series(panel, v, g);
            if (!s.x.empty()) plot.series.push_back(std::move(s));
        }
        plots.push_back(std::move(plot));
    }
    return render_panels(plots, 3, 300, 220, "Group mean by month (shaded: one standard error)");
}

std::string topic_evolution_svg(std::span<const topics::TopicVolume> rows, int K,
                                const std::map<int, std::string>& labels) {
    std::vector<LinePlot> plots;
    for (int k = 0; k < K; ++k) {
        auto it = labels.find(k);
        LinePlot plot{it != labels.end() ? fmt::format("topic {}: {}", k, it->second) : fmt::format("topic {}", k),
                      "month", "centered volume", {}};
        for (auto g : {Outcome::Graduated, Outcome::Retired}) {
            PlotSeries s;
            s.name = std::string(ingest::to_string(g));
            s.color = g == Outcome::Graduated ? kGraduatedColor : kRetiredColor;
            for (const auto& r : rows) {
                if (r.topic != k || r.group != g) continue;
                s.x.push_back(r.month_index);
                s.y.push_back(r.centered);
            }
            if (!s.x.empty()) plot.series.push_back(std::move(s));
        }
        plots.push_back(std::move(plot));
    }
    return render_panels(plots, 3, 300, 220, "Topic volume by month, centered per group and topic");
}

// ---------------------------------------------------------------------------
// Stage bookkeeping

class StageRunner {
public:
    StageRunner(const RunConfig& config, fs::path staging)
        : staging_(std::move(staging)),
          manifest_path_(config.output_dir / layout::kRunManifest),
          manifest_(RunManifest::load_or_create(manifest_path_, config.hash(), config.seed, config.to_json())) {}

    /// fn(record) fills counts, inputs and output paths (relative to the staging dir).
    template <typename Fn>
    void run(const std::string& name, Fn&& fn) {
        StageRecord record;
        record.name = name;
        record.started_at = utc_now();
        std::vector<fs::path> outputs;
        spdlog::info("stage {}", name);
        try {
            fn(record, outputs);
        } catch (const std::exception& e) {
            record.status = "failed";
            record.finished_at = utc_now();
            record.counts["error"] = e.what();
            manifest_.set_stage(record);
            fs::remove_all(staging_);
            manifest_.save(manifest_path_);
            std::throw_with_nested(StageError(name, e.what()));
        }
        record.outputs = digest_files(staging_, outputs);
        record.finished_at = utc_now();
        manifest_.set_stage(std::move(record));
    }

    void save() { manifest_.save(manifest_path_); }
    RunManifest& manifest() { return manifest_; }

private:
    fs::path staging_;
    fs::path manifest_path_;
    RunManifest manifest_;
};

}  // namespace

std::vector<std::string> artifact_preamble(const RunConfig& config) {
    return {fmt::format("govmine config_hash={} seed={}", config.hash(), config.seed)};
}

std::vector<std::string> analyze_artifacts(const RunConfig&) {
    return {layout::kMetrics,        layout::kIsEval,        layout::kIsPredictions,     layout::kIsModel,
            layout::kTopics,         layout::kTopicVolumes,  layout::kGranger,           layout::kStationarity,
            layout::kGroupTests,     layout::kGroupMeansPlot, layout::kTopicEvolutionPlot};
}

// ---------------------------------------------------------------------------

IngestSummary cmd_ingest(const RunConfig& config) {
    config.validate();
    if (!fs::is_directory(config.corpus_root))
        throw IngestError("corpus root does not exist: " + config.corpus_root.string());
    const auto manifests = load_projects(config);

    RunManifest run = RunManifest::load_or_create(config.output_dir / layout::kRunManifest, config.hash(), config.seed,
                                                  config.to_json());
    StageRecord record;
    record.name = "ingest";
    record.started_at = utc_now();

    ingest::IngestSettings settings;
    if (!config.bot_rules.empty()) settings.bot_rules = ingest::BotRules::from_file(config.bot_rules);
    if (!config.extensions.empty()) settings.source_filter = ingest::SourceFilter::from_file(config.extensions);
    settings.identities = load_identities(config);
    settings.window_margin_months = config.window_margin_months;
    settings.thread_subject_days = config.thread_window_days;

    std::vector<ingest::ProjectCorpus> corpora(manifests.size());
    parallel_for(manifests.size(), resolve_jobs(config.jobs),
                 [&](std::size_t i) { corpora[i] = ingest::ingest_project(config.corpus_root, manifests[i], settings); });

    const fs::path out_dir = config.output_dir / layout::kCorpusDir;
    fs::remove_all(out_dir);
    fs::create_directories(out_dir);
    ingest::IngestCounts total;
    json per_project = json::object();
    std::vector<fs::path> outputs;
    for (const auto& c : corpora) {
        const auto dir = out_dir / c.manifest.project_id;
        fs::create_directories(dir);
        ingest::write_emails_jsonl(dir / "emails.jsonl", c.emails);
        ingest::write_commits_jsonl(dir / "commits.jsonl", c.commits);
        outputs.push_back(dir / "emails.jsonl");
        outputs.push_back(dir / "commits.jsonl");
        per_project[c.manifest.project_id] = c.counts.to_json();
        total += c.counts;
    }
    json stats = provenance(config);
    stats["projects"] = per_project;
    stats["total"] = total.to_json();
    write_json(config.output_dir / layout::kIngestStats, stats);
    outputs.push_back(config.output_dir / layout::kIngestStats);

    IngestSummary summary;
    summary.projects = corpora.size();
    summary.emails_retained = total.emails_retained;
    summary.emails_bot = total.emails_bot;
    summary.commits_retained = total.commits_retained;
    const auto judged = total.emails_retained + total.emails_bot + total.emails_out_of_window;
    summary.email_bot_ratio = judged ? static_cast<double>(total.emails_bot) / static_cast<double>(judged) : 0.0;

    record.inputs = digest_tree(config.corpus_root);
    record.outputs = digest_files(config.output_dir, outputs);
    record.counts = total.to_json();
    record.finished_at = utc_now();
    run.set_stage(std::move(record));
    run.save(config.output_dir / layout::kRunManifest);
    return summary;
}

// ---------------------------------------------------------------------------

void cmd_analyze(const RunConfig& config) {
    config.validate();
    const unsigned jobs = resolve_jobs(config.jobs);
    const fs::path staging = config.output_dir / kStagingDir;
    fs::remove_all(staging);
    fs::create_directories(staging);
    StageRunner runner(config, staging);
    const auto preamble = artifact_preamble(config);

    std::vector<ProjectData> projects;
    std::vector<ingest::ProjectManifest> manifests;
    std::vector<stnet::MetricRow> rows;
    std::vector<Email> emails;  // all projects, project order
    Predictions predictions;
    std::map<stnet::ProjectMonth, stnet::RoleCounts> is_counts;
    stnet::PanelSeries panel;
    stnet::PanelSeries trimmed;
    std::vector<topics::TopicVolume> volumes;
    int topic_count = 0;

    runner.run("networks", [&](StageRecord& rec, std::vector<fs::path>&) {
        projects = load_ingested(config);
        for (const auto& p : projects) manifests.push_back(p.manifest);
        rec.inputs = digest_tree(config.output_dir / layout::kCorpusDir);
        std::vector<std::vector<stnet::MetricRow>> per_project(projects.size());
        parallel_for(projects.size(), jobs, [&](std::size_t i) {
            const auto& p = projects[i];
            const auto origin = p.manifest.start_time();
            const int end = last_month(p.manifest);
            const auto parents = stnet::sender_index(p.emails);
            std::map<int, std::vector<Email>> month_emails;
            std::map<int, std::vector<ingest::Commit>> month_commits;
            for (const auto& e : p.emails) {
                const int m = month_index(e.sent_at, origin);
                if (m >= 0 && m <= end) month_emails[m].push_back(e);
            }
            for (const auto& c : p.commits) {
                const int m = month_index(c.authored_at, origin);
                if (m >= 0 && m <= end) month_commits[m].push_back(c);
            }
            std::set<int> months;
            for (const auto& [m, _] : month_emails) months.insert(m);
            for (const auto& [m, _] : month_commits) months.insert(m);
            for (int m : months) {
                stnet::MetricRow row;
                row.project_id = p.manifest.project_id;
                row.month_index = m;
                row.social = stnet::social_metrics(stnet::build_social_net(month_emails[m], m, parents));
                row.tech = stnet::tech_metrics(stnet::build_tech_net(month_commits[m], m));
                per_project[i].push_back(std::move(row));
            }
        });
        for (auto& v : per_project)
            for (auto& r : v) rows.push_back(std::move(r));
        std::size_t n_emails = 0, n_commits = 0;
        for (const auto& p : projects) {
            n_emails += p.emails.size();
            n_commits += p.commits.size();
        }
        rec.counts = {{"projects", projects.size()},
                      {"project_months", rows.size()},
                      {"emails", n_emails},
                      {"commits", n_commits}};
    });

    runner.run("is", [&](StageRecord& rec, std::vector<fs::path>& outputs) {
        for (auto& p : projects)
            for (auto& e : p.emails) emails.push_back(std::move(e));
        for (auto& p : projects) p.emails.clear();
        assign_tokens(emails, config);
        std::vector<fs::path> inputs;
        if (auto gold = config.gold_path()) {
            institutional::apply_gold(emails, institutional::read_gold_jsonl(*gold));
            inputs.push_back(*gold);
        }
        if (!config.policies.empty()) inputs.push_back(config.policies);
        if (config.classifier.model) inputs.push_back(*config.classifier.model);
        for (const auto& f : inputs) rec.inputs[f.filename().string()] = sha256_file(f);

        const auto prepared = prepare_classifier(emails, config);
        json eval = provenance(config);
        eval["classifier"] = config.classifier.kind;
        eval["train_sentences"] = prepared.train_sentences;
        eval["test_sentences"] = prepared.test_sentences;
        eval["holdout_fraction"] = config.holdout_fraction;
        eval["evaluated"] = prepared.eval.has_value();
        if (prepared.eval) eval["metrics"] = prepared.eval->to_json();
        write_json(staging / layout::kIsEval, eval);

        predictions = predict_emails(prepared.handle, emails, config.token_budget);
        fs::create_directories((staging / layout::kIsPredictions).parent_path());
        institutional::write_predictions_jsonl(staging / layout::kIsPredictions, emails, predictions);

        json model;
        if (const auto* baseline = std::get_if<institutional::BaselineModel>(&prepared.handle)) {
            model = baseline->to_json();
        } else {
            model = {{"kind", "external"},
                     {"endpoint", config.classifier.endpoint},
                     {"model_hash", prepared.model_hash}};
        }
        model.update(provenance(config));
        write_text(staging / layout::kIsModel, model.dump() + "\n");

        std::map<std::string, ingest::ProjectManifest> by_id;
        for (const auto& m : manifests) by_id[m.project_id] = m;
        const auto identities = load_identities(config);
        is_counts = institutional::count_is_by_role(emails, predictions, identities, by_id);
        std::size_t detected = 0, sentences = 0;
        for (const auto& [id, labels] : predictions) {
            sentences += labels.size();
            detected += static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
        }
        rec.counts = {{"sentences", sentences}, {"is_detected", detected}};
        if (prepared.eval) rec.counts["f1"] = prepared.eval->f1;
        outputs = {layout::kIsEval, layout::kIsPredictions, layout::kIsModel};
    });

    runner.run("panel", [&](StageRecord& rec, std::vector<fs::path>& outputs) {
        std::map<std::string, int> ends;
        for (const auto& m : manifests) ends[m.project_id] = last_month(m);
        std::erase_if(is_counts, [&](const auto& kv) { return kv.first.second > ends.at(kv.first.first); });
        panel = stnet::assemble_panel(rows, is_counts, groups_of(manifests));
        stnet::write_metrics_csv(staging / layout::kMetrics, panel, preamble);
        std::size_t inactive = 0, months = 0;
        for (const auto& p : panel.projects) {
            months += p.length();
            inactive += static_cast<std::size_t>(std::count(p.inactive.begin(), p.inactive.end(), true));
        }
        rec.counts = {{"project_months", months}, {"inactive_months", inactive}};
        outputs = {layout::kMetrics};
    });

    runner.run("topics", [&](StageRecord& rec, std::vector<fs::path>& outputs) {
        std::map<std::string, const ingest::ProjectManifest*> by_id;
        for (const auto& m : manifests) by_id[m.project_id] = &m;
        std::vector<std::string> texts;
        std::vector<topics::DocumentMeta> meta;
        for (const auto& e : emails) {
            const auto* m = by_id.at(e.project_id);
            const int month = month_index(e.sent_at, m->start_time());
            if (month < 0 || month > last_month(*m)) continue;
            const auto& labels = predictions.at(e.message_id);
            for (std::size_t k = 0; k < e.sentences.size(); ++k) {
                if (!labels[k]) continue;
                texts.push_back(e.sentences[k].text);
                meta.push_back({e.project_id, month, m->outcome});
            }
        }
        if (texts.size() < 2) throw PreconditionError("fewer than two institutional statements to model");
        topics::PreprocessOptions pre;
        pre.min_count = config.min_count;
        pre.min_token_length = config.min_token_length;
        pre.max_doc_fraction = config.max_doc_fraction;
        const auto corpus = topics::preprocess(texts, pre);

        topics::LdaOptions lda;
        lda.iterations = config.lda_iterations;
        lda.alpha = config.lda_alpha;
        lda.beta = config.lda_beta;
        std::optional<topics::SelectKResult> selection;
        int K = 0;
        if (config.lda_k) {
            K = *config.lda_k;
        } else {
            std::vector<int> grid;
            for (int k : config.lda_grid)
                if (static_cast<std::size_t>(k) <= corpus.docs.size()) grid.push_back(k);
            if (grid.empty()) throw PreconditionError("no LDA grid value fits the number of documents");
            std::vector<std::uint64_t> seeds;
            for (int s = 0; s < config.lda_seeds; ++s) seeds.push_back(config.seed + static_cast<std::uint64_t>(s));
            selection = topics::select_k(corpus, grid, seeds, lda, jobs);
            K = selection->best_k;
        }
        const auto model = topics::fit_lda(corpus, K, lda, config.seed);
        auto doc = topics::topics_json(model, selection ? &*selection : nullptr);
        json labels = json::object();
        for (const auto& [k, label] : config.topic_labels) labels[std::to_string(k)] = label;
        doc["labels"] = labels;
        doc["documents"] = corpus.docs.size();
        doc.update(provenance(config));
        write_json(staging / layout::kTopics, doc);

        volumes = topics::topic_volumes(model, corpus, meta, config.horizon_months);
        topics::write_topic_volumes_csv(staging / layout::kTopicVolumes, volumes, preamble);
        topic_count = K;
        rec.counts = {{"documents", corpus.docs.size()}, {"vocabulary", corpus.vocabulary.size()}, {"K", K}};
        outputs = {layout::kTopics, layout::kTopicVolumes};
    });

    runner.run("stats", [&](StageRecord& rec, std::vector<fs::path>& outputs) {
        stats::GridOptions grid;
        grid.lag = config.granger_lag;
        grid.alpha = config.significance;
        grid.adf_alpha = config.adf_alpha;
        grid.nonstationary =
            config.nonstationary == "difference" ? stats::NonstationaryPolicy::Difference : stats::NonstationaryPolicy::Exclude;
        grid.small_sample = config.small_sample;
        grid.st_variables = config.st_variables;
        grid.is_variables = config.is_variables;
        grid.jobs = jobs;
        const auto result = stats::run_grid(panel, grid);

        trimmed = panel;
        const auto masked = stats::trim_outliers(trimmed, config.trim_fraction);
        const auto comparisons = stats::group_tests(trimmed);

        fs::create_directories((staging / layout::kGranger).parent_path());
        stats::write_granger_csv(staging / layout::kGranger, result, preamble);
        stats::write_stationarity_csv(staging / layout::kStationarity, result.stationarity, preamble);
        stats::write_group_tests_csv(staging / layout::kGroupTests, comparisons, preamble);

        std::size_t testable = 0, significant = 0;
        for (const auto& t : result.tests) {
            if (!t.result) continue;
            ++testable;
            if (t.adjusted && t.adjusted->significant) ++significant;
        }
        std::size_t trimmed_total = 0;
        for (auto n : masked) trimmed_total += n;
        rec.counts = {{"tests", result.tests.size()},
                      {"tests_run", testable},
                      {"significant", significant},
                      {"edges", result.edges.size()},
                      {"trimmed_observations", trimmed_total}};
        outputs = {layout::kGranger, layout::kStationarity, layout::kGroupTests};
    });

    runner.run("plots", [&](StageRecord& rec, std::vector<fs::path>& outputs) {
        write_text(staging / layout::kGroupMeansPlot, with_provenance(config, group_means_svg(trimmed)));
        write_text(staging / layout::kTopicEvolutionPlot,
                   with_provenance(config, topic_evolution_svg(volumes, topic_count, config.topic_labels)));
        rec.counts = {{"plots", 2}};
        outputs = {layout::kGroupMeansPlot, layout::kTopicEvolutionPlot};
    });

    // Publish: move staged artifacts over the previous ones.
    for (const auto& rel : analyze_artifacts(config)) {
        const auto from = staging / rel;
        const auto to = config.output_dir / rel;
        fs::create_directories(to.parent_path());
        fs::remove(to);
        fs::rename(from, to);
    }
    fs::remove_all(staging);
    runner.save();
}

// ---------------------------------------------------------------------------

namespace {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw ConsistencyError("missing column " + std::string(name));
    }
};

CsvTable read_csv(const fs::path& path) {
    require_artifact(path);
    CsvTable t;
    const auto content = read_file(path);
    for (auto line : text::split_lines(content)) {
        if (line.empty() || line.front() == '#') continue;
        auto fields = text::parse_csv_line(line);
        if (t.header.empty()) t.header = std::move(fields);
        else t.rows.push_back(std::move(fields));
    }
    return t;
}

std::string fmt_num(double v) {
    if (std::isnan(v)) return "NA";
    return fmt::format("{:.4f}", v);
}

std::string fmt_field(const std::string& v) {
    if (v == "NA" || v.empty()) return "NA";
    try {
        return fmt_num(std::stod(v));
    } catch (const std::exception&) {
        return v;
    }
}

}  // namespace

void cmd_report(const RunConfig& config) {
    config.validate();
    const auto metrics_path = config.output_dir / layout::kMetrics;
    const auto granger_path = config.output_dir / layout::kGranger;
    const auto group_path = config.output_dir / layout::kGroupTests;
    require_artifact(metrics_path);
    require_artifact(granger_path);
    require_artifact(group_path);
    const auto manifests = load_projects(config);
    auto panel = stnet::read_metrics_csv(metrics_path, groups_of(manifests));
    stats::trim_outliers(panel, config.trim_fraction);

    std::size_t n_grad = 0, n_ret = 0;
    for (const auto& p : panel.projects) (p.group == Outcome::Graduated ? n_grad : n_ret)++;

    std::string md;
    md += "# Socio-technical and institutional analysis\n\n";
    md += fmt::format("config_hash: `{}`  \nseed: `{}`\n\n", config.hash(), config.seed);
    md += fmt::format("Projects: {} ({} graduated, {} retired). Outliers above the {:.1f}% upper quantile are "
                      "masked per variable.\n\n",
                      panel.projects.size(), n_grad, n_ret, 100.0 * (1.0 - config.trim_fraction));

    md += "## Summary statistics\n\n";
    md += "| variable | n (all) | mean | sd | q25 | q75 | n (active) | mean | sd | q25 | q75 |\n";
    md += "|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& v : stnet::panel_variables()) {
        const auto all = stnet::summarize_variable(panel, v, false);
        const auto act = stnet::summarize_variable(panel, v, true);
        md += fmt::format("| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |\n", v, all.n, fmt_num(all.mean),
                          fmt_num(all.sd), fmt_num(all.q25), fmt_num(all.q75), act.n, fmt_num(act.mean),
                          fmt_num(act.sd), fmt_num(act.q25), fmt_num(act.q75));
    }

    md += "\n## Group comparisons (Mann-Whitney U, active months)\n\n";
    md += "| variable | n graduated | n retired | mean graduated | mean retired | median graduated | median retired | U | "
          "p |\n";
    md += "|---|---|---|---|---|---|---|---|---|\n";
    const auto groups = read_csv(group_path);
    for (const auto& r : groups.rows) {
        auto col = [&](std::string_view name) { return r.at(groups.column(name)); };
        md += fmt::format("| {} | {} | {} | {} | {} | {} | {} | {} | {} |\n", col("variable"), col("n_graduated"),
                          col("n_retired"), fmt_field(col("mean_graduated")), fmt_field(col("mean_retired")),
                          fmt_field(col("median_graduated")), fmt_field(col("median_retired")), fmt_field(col("U")),
                          fmt_field(col("p_value")));
    }

    const auto granger = read_csv(granger_path);
    const auto c_group = granger.column("group"), c_x = granger.column("x_var"), c_y = granger.column("y_var"),
               c_sig = granger.column("significant"), c_adj = granger.column("adjusted_p"),
               c_n = granger.column("n_projects");
    md += fmt::format("\n## Granger causality edges (lag {}, BH-adjusted p < {})\n", config.granger_lag,
                      config.significance);
    for (auto g : {Outcome::Graduated, Outcome::Retired}) {
        const std::string gname(ingest::to_string(g));
        std::map<std::pair<std::string, std::string>, std::string> sig;
        std::size_t tested = 0;
        for (const auto& r : granger.rows) {
            if (r[c_group] != gname) continue;
            if (r[c_n] != "0") ++tested;
            if (r[c_sig] == "1") sig[{r[c_x], r[c_y]}] = r[c_adj];
        }
        md += fmt::format("\n### {}\n\n{} tests with at least one usable project.\n\n", gname, tested);
        std::vector<std::string> lines;
        for (const auto& [edge, p] : sig) {
            const auto& [x, y] = edge;
            if (auto back = sig.find({y, x}); back != sig.end()) {
                if (x < y)
                    lines.push_back(fmt::format("- {} <-> {} (p = {}, {})", x, y, fmt_field(p), fmt_field(back->second)));
            } else {
                lines.push_back(fmt::format("- {} -> {} (p = {})", x, y, fmt_field(p)));
            }
        }
        if (lines.empty()) md += "No significant edges.\n";
        for (const auto& l : lines) md += l + "\n";
    }
    write_text(config.output_dir / layout::kReport, md);

    RunManifest run = RunManifest::load_or_create(config.output_dir / layout::kRunManifest, config.hash(), config.seed,
                                                  config.to_json());
    StageRecord record;
    record.name = "report";
    record.started_at = utc_now();
    record.inputs = digest_files(config.output_dir, {layout::kMetrics, layout::kGranger, layout::kGroupTests});
    record.outputs = digest_files(config.output_dir, {layout::kReport});
    record.finished_at = utc_now();
    run.set_stage(std::move(record));
    run.save(config.output_dir / layout::kRunManifest);
}

// ---------------------------------------------------------------------------

ClassifierEvaluation cmd_eval_classifier(const RunConfig& config, std::optional<std::size_t> synthetic_sentences) {
    config.validate();
    ClassifierEvaluation out;
    if (synthetic_sentences) {
        out.source = "synthetic";
        constexpr double kPositiveRate = 0.05;
        auto train = institutional::synthetic_labeled_emails(*synthetic_sentences, kPositiveRate, config.seed);
        auto test = institutional::synthetic_labeled_emails(*synthetic_sentences, kPositiveRate, config.seed + 1);
        institutional::ClassifierHandle handle;
        if (config.classifier.kind == "external") handle = external_client(config);
        else if (config.classifier.model) handle = institutional::BaselineModel::load(*config.classifier.model);
        else handle = train_on(train, config);
        out.train_sentences = sentence_count(train);
        out.report = evaluate_on(handle, test, config.token_budget, &out.test_sentences);
    } else {
        out.source = "gold";
        const auto gold = config.gold_path();
        if (!gold) throw Error("no gold annotations configured");
        std::vector<Email> emails;
        for (auto& p : load_ingested(config))
            for (auto& e : p.emails) emails.push_back(std::move(e));
        assign_tokens(emails, config);
        institutional::apply_gold(emails, institutional::read_gold_jsonl(*gold));
        const auto prepared = prepare_classifier(emails, config);
        if (!prepared.eval) throw PreconditionError("no held-out gold emails to evaluate on");
        out.report = *prepared.eval;
        out.train_sentences = prepared.train_sentences;
        out.test_sentences = prepared.test_sentences;
    }
    return out;
}

std::size_t cmd_convert_gitlog(std::istream& in, std::ostream& out) { return ingest::convert_gitlog(in, out); }

}  // namespace govmine::pipeline
