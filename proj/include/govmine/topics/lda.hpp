#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "govmine/topics/corpus.hpp"

namespace govmine::topics {

struct LdaOptions {
    int iterations = 1000;
    /// Symmetric document-topic prior; 50/K when unset.
    std::optional<double> alpha;
    double beta = 0.01;
};

struct TopicModel {
    int K = 0;
    double alpha = 0;
    double beta = 0;
    std::vector<std::string> vocabulary;
    std::vector<std::vector<double>> topic_word;  // K x V
    std::vector<std::vector<double>> doc_topic;   // D x K

    /// Term ids of topic k by decreasing probability (ties: lower id first).
    std::vector<int> top_terms(int k, std::size_t n) const;
};

/// Collapsed Gibbs sampler state.
class LdaSampler {
public:
    LdaSampler(const Corpus& corpus, int K, double alpha, double beta, std::uint64_t seed);

    void sweep();
    /// Count tables agree with the assignments and total the corpus size.
    bool counts_consistent() const;
    std::size_t total_assigned() const;
    TopicModel estimate() const;

private:
    double uniform();

    const Corpus& corpus_;
    int K_;
    int V_;
    double alpha_;
    double beta_;
    std::mt19937_64 rng_;
    std::vector<std::vector<int>> z_;
    std::vector<int> n_dk_;  // D x K
    std::vector<int> n_kw_;  // K x V
    std::vector<int> n_k_;
    std::vector<double> p_;
};

/// Throws PreconditionError when K < 2, K exceeds the number of documents, or
/// the vocabulary is empty.
TopicModel fit_lda(const Corpus& corpus, int K, const LdaOptions& options, std::uint64_t seed);

/// Mean UMass coherence over topics; pairs whose conditioning term never
/// occurs are skipped.
double coherence_umass(const TopicModel& model, const Corpus& corpus, std::size_t top_n = 10);

struct SelectKResult {
    int best_k = 0;
    std::vector<int> grid;
    std::vector<double> mean_coherence;        // per grid entry
    std::vector<std::vector<double>> per_seed;  // grid x seeds
};

/// Fits every (K, seed) pair on up to `jobs` threads. K* maximizes mean
/// coherence; scores within 1e-12 count as ties, which go to the smaller K.
SelectKResult select_k(const Corpus& corpus, std::span<const int> grid, std::span<const std::uint64_t> seeds,
                       const LdaOptions& options = {}, unsigned jobs = 1);

nlohmann::json topics_json(const TopicModel& model, const SelectKResult* selection, std::size_t top_n = 50);

}  // namespace govmine::topics
