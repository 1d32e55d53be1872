#include "govmine/topics/lda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "govmine/core/error.hpp"
#include "govmine/core/parallel.hpp"
#include "govmine/core/random.hpp"

namespace govmine::topics {

std::vector<int> TopicModel::top_terms(int k, std::size_t n) const {
    const auto& row = topic_word.at(static_cast<std::size_t>(k));
    std::vector<int> ids(row.size());
    std::iota(ids.begin(), ids.end(), 0);
    n = std::min(n, ids.size());
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(), [&](int a, int b) {
        const auto pa = row[static_cast<std::size_t>(a)], pb = row[static_cast<std::size_t>(b)];
        return pa != pb ? pa > pb : a < b;
    });
    ids.resize(n);
    return ids;
}

LdaSampler::LdaSampler(const Corpus& corpus, int K, double alpha, double beta, std::uint64_t seed)
    : corpus_(corpus),
      K_(K),
      V_(static_cast<int>(corpus.vocabulary.size())),
      alpha_(alpha),
      beta_(beta),
      rng_(seed),
      z_(corpus.docs.size()),
      n_dk_(corpus.docs.size() * static_cast<std::size_t>(K), 0),
      n_kw_(static_cast<std::size_t>(K) * static_cast<std::size_t>(V_), 0),
      n_k_(static_cast<std::size_t>(K), 0),
      p_(static_cast<std::size_t>(K), 0.0) {
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
        z_[d].resize(corpus.docs[d].size());
        for (std::size_t i = 0; i < corpus.docs[d].size(); ++i) {
            const int k = static_cast<int>(rnd::index(rng_, static_cast<std::uint64_t>(K)));
            const int w = corpus.docs[d][i];
            z_[d][i] = k;
            ++n_dk_[d * static_cast<std::size_t>(K_) + static_cast<std::size_t>(k)];
            ++n_kw_[static_cast<std::size_t>(k) * static_cast<std::size_t>(V_) + static_cast<std::size_t>(w)];
            ++n_k_[static_cast<std::size_t>(k)];
        }
    }
}

double LdaSampler::uniform() { return rnd::uniform(rng_); }

void LdaSampler::sweep() {
    const auto K = static_cast<std::size_t>(K_);
    const auto V = static_cast<std::size_t>(V_);
    const double vbeta = static_cast<double>(V_) * beta_;
    for (std::size_t d = 0; d < corpus_.docs.size(); ++d) {
        int* ndk = &n_dk_[d * K];
        for (std::size_t i = 0; i < corpus_.docs[d].size(); ++i) {
            const auto w = static_cast<std::size_t>(corpus_.docs[d][i]);
            auto k = static_cast<std::size_t>(z_[d][i]);
            --ndk[k];
            --n_kw_[k * V + w];
            --n_k_[k];
            double total = 0;
            for (std::size_t t = 0; t < K; ++t) {
                total += (ndk[t] + alpha_) * (n_kw_[t * V + w] + beta_) / (n_k_[t] + vbeta);
                p_[t] = total;
            }
            const double u = uniform() * total;
            k = 0;
            while (k + 1 < K && p_[k] <= u) ++k;
            z_[d][i] = static_cast<int>(k);
            ++ndk[k];
            ++n_kw_[k * V + w];
            ++n_k_[k];
        }
    }
}

std::size_t LdaSampler::total_assigned() const {
    return static_cast<std::size_t>(std::accumulate(n_k_.begin(), n_k_.end(), 0LL));
}

bool LdaSampler::counts_consistent() const {
    const auto K = static_cast<std::size_t>(K_);
    const auto V = static_cast<std::size_t>(V_);
    std::vector<int> dk(n_dk_.size(), 0), kw(n_kw_.size(), 0), k_(n_k_.size(), 0);
    for (std::size_t d = 0; d < z_.size(); ++d)
        for (std::size_t i = 0; i < z_[d].size(); ++i) {
            const auto k = static_cast<std::size_t>(z_[d][i]);
            ++dk[d * K + k];
            ++kw[k * V + static_cast<std::size_t>(corpus_.docs[d][i])];
            ++k_[k];
        }
    return dk == n_dk_ && kw == n_kw_ && k_ == n_k_ && total_assigned() == corpus_.token_count();
}

TopicModel LdaSampler::estimate() const {
    const auto K = static_cast<std::size_t>(K_);
    const auto V = static_cast<std::size_t>(V_);
    TopicModel m;
    m.K = K_;
    m.alpha = alpha_;
    m.beta = beta_;
    m.vocabulary = corpus_.vocabulary;
    auto normalize = [](std::vector<double>& row) {
        const double s = std::accumulate(row.begin(), row.end(), 0.0);
        for (auto& v : row) v /= s;
    };
    m.topic_word.assign(K, std::vector<double>(V));
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t w = 0; w < V; ++w) m.topic_word[k][w] = n_kw_[k * V + w] + beta_;
        normalize(m.topic_word[k]);
    }
    m.doc_topic.assign(corpus_.docs.size(), std::vector<double>(K));
    for (std::size_t d = 0; d < corpus_.docs.size(); ++d) {
        for (std::size_t k = 0; k < K; ++k) m.doc_topic[d][k] = n_dk_[d * K + k] + alpha_;
        normalize(m.doc_topic[d]);
    }
    return m;
}

TopicModel fit_lda(const Corpus& corpus, int K, const LdaOptions& options, std::uint64_t seed) {
    if (K < 2) throw PreconditionError("LDA needs K >= 2, got " + std::to_string(K));
    if (static_cast<std::size_t>(K) > corpus.docs.size())
        throw PreconditionError("K = " + std::to_string(K) + " exceeds the number of documents (" +
                                std::to_string(corpus.docs.size()) + ")");
    if (corpus.vocabulary.empty()) throw PreconditionError("LDA vocabulary is empty");
    if (options.iterations < 0) throw PreconditionError("LDA iterations must be >= 0");
    const double alpha = options.alpha.value_or(50.0 / K);
    if (!(alpha > 0) || !(options.beta > 0)) throw PreconditionError("LDA priors must be positive");
    LdaSampler sampler(corpus, K, alpha, options.beta, seed);
    for (int it = 0; it < options.iterations; ++it) sampler.sweep();
    return sampler.estimate();
}

double coherence_umass(const TopicModel& model, const Corpus& corpus, std::size_t top_n) {
    const std::size_t V = corpus.vocabulary.size();
    std::vector<std::vector<int>> tops;
    std::vector<int> slot(V, -1);
    std::vector<int> words;
    for (int k = 0; k < model.K; ++k) {
        tops.push_back(model.top_terms(k, top_n));
        for (int w : tops.back())
            if (slot[static_cast<std::size_t>(w)] < 0) {
                slot[static_cast<std::size_t>(w)] = static_cast<int>(words.size());
                words.push_back(w);
            }
    }
    const std::size_t W = words.size();
    std::vector<std::size_t> single(W, 0);
    std::vector<std::size_t> joint(W * W, 0);
    std::vector<char> present(W);
    std::vector<std::size_t> in_doc;
    for (const auto& doc : corpus.docs) {
        std::fill(present.begin(), present.end(), 0);
        in_doc.clear();
        for (int w : doc) {
            const int s = slot[static_cast<std::size_t>(w)];
            if (s >= 0 && !present[static_cast<std::size_t>(s)]) {
                present[static_cast<std::size_t>(s)] = 1;
                in_doc.push_back(static_cast<std::size_t>(s));
            }
        }
        for (auto a : in_doc) {
            ++single[a];
            for (auto b : in_doc) ++joint[a * W + b];
        }
    }
    double sum = 0;
    for (const auto& top : tops) {
        double topic = 0;
        std::size_t pairs = 0;
        for (std::size_t i = 1; i < top.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) {
                const auto wi = static_cast<std::size_t>(slot[static_cast<std::size_t>(top[i])]);
                const auto wj = static_cast<std::size_t>(slot[static_cast<std::size_t>(top[j])]);
                if (single[wj] == 0) continue;
                topic += std::log((static_cast<double>(joint[wi * W + wj]) + 1.0) / static_cast<double>(single[wj]));
                ++pairs;
            }
        sum += pairs ? topic / static_cast<double>(pairs) : 0.0;
    }
    return model.K > 0 ? sum / model.K : 0.0;
}

SelectKResult select_k(const Corpus& corpus, std::span<const int> grid, std::span<const std::uint64_t> seeds,
                       const LdaOptions& options, unsigned jobs) {
    if (grid.empty()) throw PreconditionError("topic-count grid is empty");
    if (seeds.empty()) throw PreconditionError("select_k needs at least one seed");
    SelectKResult r;
    r.grid.assign(grid.begin(), grid.end());
    r.per_seed.assign(grid.size(), std::vector<double>(seeds.size()));
    parallel_for(grid.size() * seeds.size(), jobs, [&](std::size_t job) {
        const auto g = job / seeds.size(), s = job % seeds.size();
        const auto model = fit_lda(corpus, grid[g], options, seeds[s]);
        r.per_seed[g][s] = coherence_umass(model, corpus);
    });
    for (const auto& row : r.per_seed)
        r.mean_coherence.push_back(std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size()));
    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g) {
        const double diff = r.mean_coherence[g] - r.mean_coherence[best];
        if (diff > 1e-12 || (std::abs(diff) <= 1e-12 && grid[g] < grid[best])) best = g;
    }
    r.best_k = grid[best];
    return r;
}

nlohmann::json topics_json(const TopicModel& model, const SelectKResult* selection, std::size_t top_n) {
    nlohmann::json j;
    j["K"] = model.K;
    j["alpha"] = model.alpha;
    j["beta"] = model.beta;
    j["vocabulary_size"] = model.vocabulary.size();
    auto topics = nlohmann::json::array();
    for (int k = 0; k < model.K; ++k) {
        auto words = nlohmann::json::array();
        for (int w : model.top_terms(k, top_n))
            words.push_back({{"term", model.vocabulary[static_cast<std::size_t>(w)]},
                             {"p", model.topic_word[static_cast<std::size_t>(k)][static_cast<std::size_t>(w)]}});
        topics.push_back({{"topic_id", k}, {"top_terms", words}});
    }
    j["topics"] = topics;
    if (selection) {
        auto curve = nlohmann::json::array();
        for (std::size_t g = 0; g < selection->grid.size(); ++g)
            curve.push_back({{"K", selection->grid[g]},
                             {"coherence", selection->mean_coherence[g]},
                             {"per_seed", selection->per_seed[g]}});
        j["coherence_curve"] = curve;
        j["selected_K"] = selection->best_k;
    }
    return j;
}

}  // namespace govmine::topics
