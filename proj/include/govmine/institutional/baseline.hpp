#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "govmine/institutional/segments.hpp"

namespace govmine::institutional {

struct BaselineOptions {
    int hash_bits = 18;
    double l2 = 1e-4;
    int max_epochs = 200;
    double relative_tolerance = 1e-6;
    double threshold = 0.5;
};

/// A sparse feature vector (hashed index, value), L2-normalized.
using FeatureVector = std::vector<std::pair<std::uint32_t, double>>;

/// Features of sentence `k` of `segment`: word uni/bigrams, neighbouring
/// sentence words within the segment, deontic-marker hits, length bucket and
/// modal-verb count.
FeatureVector sentence_features(const Segment& segment, std::size_t k, int hash_bits);

/// L2-regularized logistic regression over hashed sentence features.
class BaselineModel {
public:
    BaselineModel() = default;

    double probability(const Segment& segment, std::size_t k) const;
    std::vector<bool> predict(const Segment& segment) const;

    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }
    const BaselineOptions& options() const { return options_; }
    std::uint64_t seed() const { return seed_; }
    /// Training objective after each epoch (index 0 = initial).
    const std::vector<double>& loss_history() const { return loss_history_; }

    nlohmann::json to_json() const;
    static BaselineModel from_json(const nlohmann::json& j);
    void save(const std::filesystem::path& path) const;
    static BaselineModel load(const std::filesystem::path& path);

private:
    friend BaselineModel train_baseline(std::span<const Segment>, std::uint64_t, const BaselineOptions&);

    BaselineOptions options_;
    std::uint64_t seed_ = 0;
    std::vector<double> weights_;
    double bias_ = 0;
    std::vector<double> loss_history_;
};

/// Full-batch gradient descent with fixed per-coordinate steps taken from a
/// diagonal bound on the Hessian, so the loss never increases. Stops at
/// relative loss change below the tolerance or after max_epochs. The seed is
/// recorded in the model. Throws PreconditionError for an empty or unlabeled
/// training set and when all feature vectors are identical.
BaselineModel train_baseline(std::span<const Segment> segments, std::uint64_t seed,
                             const BaselineOptions& options = {});

}  // namespace govmine::institutional
