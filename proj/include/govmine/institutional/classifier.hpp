#pragma once

#include <chrono>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "govmine/institutional/baseline.hpp"
#include "govmine/institutional/segments.hpp"
#include "govmine/institutional/tokenizer.hpp"

namespace govmine::institutional {

/// Sentences per request accepted by the classifier service.
inline constexpr std::size_t kMaxSentencesPerRequest = 64;

struct ExternalConfig {
    std::string endpoint;  // "http://host:port"
    int max_in_flight = 4;
    std::chrono::seconds timeout{60};
};

struct ExternalReply {
    std::vector<bool> labels;
    std::vector<int> token_counts;
};

/// Client for the sequential-sentence classifier service
/// (POST /classify, GET /health; JSON bodies).
class ExternalClassifier {
public:
    explicit ExternalClassifier(ExternalConfig config) : config_(std::move(config)) {}

    /// One request. Throws TransportError / ProtocolError.
    ExternalReply classify_one(const std::vector<std::string>& sentences, const std::string& request_id) const;

    /// Batches with at most max_in_flight concurrent requests; results are in
    /// input order.
    std::vector<ExternalReply> classify_many(std::span<const std::vector<std::string>> batches) const;

    /// Model hash reported by GET /health.
    std::string health() const;

    const ExternalConfig& config() const { return config_; }

private:
    ExternalConfig config_;
};

/// Token counts reported by the service override the local estimate.
class ServiceTokenizer final : public Tokenizer {
public:
    explicit ServiceTokenizer(const ExternalClassifier& client) : client_(client) {}
    int count(std::string_view text) const override;
    /// Batched counting for many sentences.
    std::vector<int> count_many(std::span<const std::string> texts) const;

private:
    const ExternalClassifier& client_;
};

using ClassifierHandle = std::variant<BaselineModel, ExternalClassifier>;

enum class ClassifierKind { Baseline, External };
ClassifierKind kind_of(const ClassifierHandle& handle);

/// Per-segment, per-sentence predictions.
std::vector<std::vector<bool>> classify(const ClassifierHandle& handle, std::span<const Segment> segments);

}  // namespace govmine::institutional
