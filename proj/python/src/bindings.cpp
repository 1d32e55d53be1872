#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "govmine/core/error.hpp"
#include "govmine/institutional/evaluation.hpp"
#include "govmine/institutional/segments.hpp"
#include "govmine/pipeline/commands.hpp"
#include "govmine/pipeline/config.hpp"
#include "govmine/pipeline/simulate.hpp"
#include "govmine/stats/adf.hpp"
#include "govmine/stats/granger.hpp"
#include "govmine/stats/tests.hpp"
#include "govmine/stnet/metrics.hpp"
#include "govmine/stnet/networks.hpp"
#include "govmine/topics/corpus.hpp"
#include "govmine/topics/lda.hpp"

namespace py = pybind11;
using namespace govmine;

namespace {

py::dict social(const std::vector<std::string>& nodes,
                const std::vector<std::tuple<std::string, std::string, int>>& edges) {
    stnet::SocialNet net("py", 0);
    for (const auto& n : nodes) net.add_node(n);
    for (const auto& [a, b, w] : edges) {
        net.add_node(a);
        net.add_node(b);
        net.add_edge(a, b, w);
    }
    const auto m = stnet::social_metrics(net);
    py::dict d;
    d["num_nodes"] = m.num_nodes;
    d["graph_density"] = m.graph_density;
    d["avg_clustering_coef"] = m.avg_clustering_coef;
    d["weighted_mean_degree"] = m.weighted_mean_degree;
    return d;
}

py::dict tech(const std::vector<std::tuple<std::string, std::string, int>>& edges) {
    stnet::TechNet net("py", 0);
    for (const auto& [dev, file, w] : edges) net.add_edge(dev, file, w);
    const auto m = stnet::tech_metrics(net);
    py::dict d;
    d["graph_density"] = m.graph_density;
    d["num_dev_nodes"] = m.num_dev_nodes;
    d["num_file_nodes"] = m.num_file_nodes;
    d["num_file_per_dev"] = m.num_file_per_dev;
    return d;
}

std::vector<std::tuple<std::size_t, std::size_t, int>> segment(const std::vector<int>& token_counts, int budget) {
    std::vector<ingest::SentenceRecord> sentences(token_counts.size());
    for (std::size_t i = 0; i < token_counts.size(); ++i) {
        sentences[i].index = i;
        sentences[i].token_count = token_counts[i];
    }
    std::vector<std::tuple<std::size_t, std::size_t, int>> out;
    for (const auto& s : institutional::segment_email(sentences, budget)) out.emplace_back(s.first, s.last, s.total_tokens);
    return out;
}

std::vector<bool> aggregate(const std::vector<std::pair<std::size_t, std::size_t>>& windows,
                            const std::vector<std::vector<bool>>& predictions, std::size_t sentence_count) {
    std::vector<institutional::Segment> segs;
    for (const auto& [first, last] : windows) {
        institutional::Segment s;
        s.first = first;
        s.last = last;
        segs.push_back(s);
    }
    return institutional::aggregate_predictions(segs, predictions, sentence_count);
}

py::dict topic_model(const std::vector<std::string>& sentences, int K, int iterations, std::uint64_t seed,
                     std::size_t top_n) {
    const auto corpus = topics::preprocess(sentences);
    topics::LdaOptions o;
    o.iterations = iterations;
    const auto m = topics::fit_lda(corpus, K, o, seed);
    std::vector<std::vector<std::string>> top;
    for (int k = 0; k < m.K; ++k) {
        std::vector<std::string> words;
        for (int w : m.top_terms(k, top_n)) words.push_back(m.vocabulary[static_cast<std::size_t>(w)]);
        top.push_back(std::move(words));
    }
    py::dict d;
    d["K"] = m.K;
    d["alpha"] = m.alpha;
    d["beta"] = m.beta;
    d["vocabulary"] = m.vocabulary;
    d["topic_word"] = m.topic_word;
    d["doc_topic"] = m.doc_topic;
    d["top_terms"] = top;
    d["coherence"] = topics::coherence_umass(m, corpus);
    return d;
}

py::dict select_k(const std::vector<std::string>& sentences, const std::vector<int>& grid,
                  const std::vector<std::uint64_t>& seeds, int iterations, unsigned jobs) {
    const auto corpus = topics::preprocess(sentences);
    topics::LdaOptions o;
    o.iterations = iterations;
    topics::SelectKResult r;
    {
        py::gil_scoped_release release;
        r = topics::select_k(corpus, grid, seeds, o, jobs);
    }
    py::dict d;
    d["best_k"] = r.best_k;
    d["grid"] = r.grid;
    d["mean_coherence"] = r.mean_coherence;
    return d;
}

pipeline::RunConfig config_for(const std::filesystem::path& path, const std::optional<std::filesystem::path>& output) {
    auto c = pipeline::load_config(path);
    if (output) c.output_dir = *output;
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Socio-technical and institutional analysis of incubator projects";

    auto base = py::register_exception<Error>(m, "GovmineError", PyExc_RuntimeError);
    py::register_exception<IngestError>(m, "IngestError", base);
    py::register_exception<ConsistencyError>(m, "ConsistencyError", base);
    py::register_exception<PreconditionError>(m, "PreconditionError", base);
    py::register_exception<SingularDesignError>(m, "SingularDesignError", base);
    py::register_exception<TransportError>(m, "TransportError", base);
    py::register_exception<ProtocolError>(m, "ProtocolError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<StageError>(m, "StageError", base);

    // Networks
    m.def("social_metrics", &social, py::arg("nodes"), py::arg("edges"),
          "Metrics of a monthly social network; edges are (src, dst, weight).");
    m.def("tech_metrics", &tech, py::arg("edges"), "Metrics of a developer-file network; edges are (dev, file, weight).");

    // Institutional statements
    m.def("segment", &segment, py::arg("token_counts"), py::arg("budget") = institutional::kDefaultTokenBudget,
          "Sliding sentence windows as (first, last, total_tokens).");
    m.def("aggregate", &aggregate, py::arg("windows"), py::arg("predictions"), py::arg("sentence_count"),
          "Sentence labels as the OR over covering windows.");
    m.def(
        "evaluate",
        [](const std::vector<bool>& gold, const std::vector<bool>& predicted) {
            const auto r = institutional::evaluate(gold, predicted);
            return py::module_::import("json").attr("loads")(r.to_json().dump());
        },
        py::arg("gold"), py::arg("predicted"));

    // Topics
    m.def("fit_lda", &topic_model, py::arg("sentences"), py::arg("K"), py::arg("iterations") = 1000,
          py::arg("seed") = 1, py::arg("top_n") = 10);
    m.def("select_k", &select_k, py::arg("sentences"), py::arg("grid"), py::arg("seeds"),
          py::arg("iterations") = 1000, py::arg("jobs") = 1);

    // Statistics
    m.def(
        "adf_test",
        [](const std::vector<double>& series, std::optional<int> lags) {
            const auto r = stats::adf_test(series, lags);
            py::dict d;
            d["statistic"] = r.statistic;
            d["p_value"] = r.p_value;
            d["lags"] = r.lags;
            d["n_obs"] = r.n_obs;
            return d;
        },
        py::arg("series"), py::arg("lags") = py::none());
    m.def(
        "granger_pair",
        [](const std::vector<double>& x, const std::vector<double>& y, int lag) {
            const auto r = stats::granger_pair(x, y, lag);
            py::dict d;
            d["wald"] = r.wald;
            d["f_stat"] = r.f_stat;
            d["p_value"] = r.f_p;
            d["n_obs"] = r.n_obs;
            return d;
        },
        py::arg("x"), py::arg("y"), py::arg("lag") = 2);
    m.def(
        "granger_panel",
        [](const std::vector<std::tuple<std::string, std::vector<double>, std::vector<double>>>& units, int lag,
           bool small_sample) {
            std::vector<stats::PanelUnit> u;
            for (const auto& [id, x, y] : units) u.push_back({id, x, y});
            const auto r = stats::granger_panel(u, {lag, small_sample});
            py::dict d;
            d["w_bar"] = r.w_bar;
            d["z_bar"] = r.z_bar;
            d["z_tilde"] = r.z_tilde;
            d["p_value"] = r.p_value;
            d["units_used"] = r.units_used;
            d["excluded_short"] = r.excluded_short;
            d["excluded_degenerate"] = r.excluded_degenerate;
            return d;
        },
        py::arg("units"), py::arg("lag") = 2, py::arg("small_sample") = false);
    m.def(
        "bh_adjust",
        [](const std::vector<double>& p, double alpha) {
            std::vector<double> out;
            for (const auto& t : stats::bh_adjust(p, alpha)) out.push_back(t.adjusted_p);
            return out;
        },
        py::arg("p_values"), py::arg("alpha") = 0.01);
    m.def(
        "mann_whitney_u",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            const auto r = stats::mann_whitney_u(a, b);
            return py::make_tuple(r.U, r.p_value, r.exact);
        },
        py::arg("a"), py::arg("b"), "Returns (U, p_value, exact).");

    // Pipeline
    m.def(
        "config_hash", [](const std::filesystem::path& path) { return pipeline::load_config(path).hash(); },
        py::arg("config"));
    m.def(
        "simulate",
        [](const std::filesystem::path& dir, std::uint64_t seed, int projects) {
            pipeline::SimulationOptions o;
            o.seed = seed;
            o.projects = projects;
            const auto s = pipeline::simulate_corpus(dir, o);
            py::dict d;
            d["emails"] = s.emails;
            d["bot_emails"] = s.bot_emails;
            d["commits"] = s.commits;
            d["gold_sentences"] = s.gold_sentences;
            return d;
        },
        py::arg("dir"), py::arg("seed") = 20240117, py::arg("projects") = 3);
    m.def(
        "ingest",
        [](const std::filesystem::path& config, std::optional<std::filesystem::path> output_dir) {
            pipeline::IngestSummary s;
            {
                py::gil_scoped_release release;
                s = pipeline::cmd_ingest(config_for(config, output_dir));
            }
            py::dict d;
            d["projects"] = s.projects;
            d["emails_retained"] = s.emails_retained;
            d["emails_bot"] = s.emails_bot;
            d["commits_retained"] = s.commits_retained;
            d["email_bot_ratio"] = s.email_bot_ratio;
            return d;
        },
        py::arg("config"), py::arg("output_dir") = py::none());
    m.def(
        "analyze",
        [](const std::filesystem::path& config, std::optional<std::filesystem::path> output_dir) {
            py::gil_scoped_release release;
            pipeline::cmd_analyze(config_for(config, output_dir));
        },
        py::arg("config"), py::arg("output_dir") = py::none());
    m.def(
        "report",
        [](const std::filesystem::path& config, std::optional<std::filesystem::path> output_dir) {
            py::gil_scoped_release release;
            pipeline::cmd_report(config_for(config, output_dir));
        },
        py::arg("config"), py::arg("output_dir") = py::none());
}
