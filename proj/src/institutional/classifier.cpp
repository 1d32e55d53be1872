#include "govmine/institutional/classifier.hpp"

#include <algorithm>
#include <atomic>

#include <httplib.h>
#include <json.hpp>

#include "govmine/core/error.hpp"
#include "govmine/core/parallel.hpp"

namespace govmine::institutional {

using nlohmann::json;

namespace {

httplib::Client make_client(const ExternalConfig& config) {
    httplib::Client cli(config.endpoint);
    cli.set_connection_timeout(std::chrono::seconds(5));
    cli.set_read_timeout(config.timeout);
    cli.set_write_timeout(config.timeout);
    return cli;
}

bool as_label(const json& v) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number_integer()) return v.get<int>() != 0;
    throw ProtocolError("label is neither boolean nor 0/1");
}

}  // namespace

ExternalReply ExternalClassifier::classify_one(const std::vector<std::string>& sentences,
                                               const std::string& request_id) const {
    if (sentences.empty() || sentences.size() > kMaxSentencesPerRequest)
        throw ProtocolError("request must carry 1.." + std::to_string(kMaxSentencesPerRequest) + " sentences, got " +
                            std::to_string(sentences.size()));
    auto cli = make_client(config_);
    const json request{{"request_id", request_id}, {"sentences", sentences}};
    auto res = cli.Post("/classify", request.dump(), "application/json");
    if (!res)
        throw TransportError("classifier service at " + config_.endpoint + " unreachable: " +
                             httplib::to_string(res.error()));
    if (res->status != 200)
        throw ProtocolError("classifier service returned HTTP " + std::to_string(res->status));
    json reply;
    try {
        reply = json::parse(res->body);
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("malformed classifier response: ") + e.what());
    }
    if (reply.contains("error")) throw ProtocolError("classifier service error: " + reply["error"].dump());
    if (!reply.contains("request_id") || reply["request_id"] != request_id)
        throw ProtocolError("response request_id does not match request " + request_id);
    if (!reply.contains("labels") || !reply["labels"].is_array())
        throw ProtocolError("response for " + request_id + " has no labels array");
    const auto& labels = reply["labels"];
    if (labels.size() != sentences.size())
        throw ProtocolError("response for " + request_id + " has " + std::to_string(labels.size()) +
                            " labels for " + std::to_string(sentences.size()) + " sentences");
    ExternalReply out;
    for (const auto& l : labels) out.labels.push_back(as_label(l));
    if (reply.contains("token_counts")) {
        const auto& tc = reply["token_counts"];
        if (!tc.is_array() || tc.size() != sentences.size())
            throw ProtocolError("response for " + request_id + " has misaligned token_counts");
        for (const auto& t : tc) out.token_counts.push_back(t.get<int>());
    }
    return out;
}

std::vector<ExternalReply> ExternalClassifier::classify_many(std::span<const std::vector<std::string>> batches) const {
    std::vector<ExternalReply> out(batches.size());
    const unsigned in_flight = static_cast<unsigned>(std::max(1, config_.max_in_flight));
    parallel_for(batches.size(), in_flight,
                 [&](std::size_t i) { out[i] = classify_one(batches[i], "req-" + std::to_string(i)); });
    return out;
}

std::string ExternalClassifier::health() const {
    auto cli = make_client(config_);
    auto res = cli.Get("/health");
    if (!res)
        throw TransportError("classifier service at " + config_.endpoint + " unreachable: " +
                             httplib::to_string(res.error()));
    try {
        auto j = json::parse(res->body);
        return j.value("model_hash", std::string());
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("malformed health response: ") + e.what());
    }
}

int ServiceTokenizer::count(std::string_view text) const {
    std::vector<std::string> one{std::string(text)};
    return count_many(one).front();
}

std::vector<int> ServiceTokenizer::count_many(std::span<const std::string> texts) const {
    std::vector<std::vector<std::string>> batches;
    for (std::size_t i = 0; i < texts.size(); i += kMaxSentencesPerRequest) {
        auto end = std::min(texts.size(), i + kMaxSentencesPerRequest);
        batches.emplace_back(texts.begin() + static_cast<std::ptrdiff_t>(i), texts.begin() + static_cast<std::ptrdiff_t>(end));
    }
    auto replies = client_.classify_many(batches);
    std::vector<int> counts;
    counts.reserve(texts.size());
    for (std::size_t b = 0; b < replies.size(); ++b) {
        if (replies[b].token_counts.size() != batches[b].size())
            throw ProtocolError("classifier service did not report token counts");
        counts.insert(counts.end(), replies[b].token_counts.begin(), replies[b].token_counts.end());
    }
    return counts;
}

ClassifierKind kind_of(const ClassifierHandle& handle) {
    return std::holds_alternative<BaselineModel>(handle) ? ClassifierKind::Baseline : ClassifierKind::External;
}

std::vector<std::vector<bool>> classify(const ClassifierHandle& handle, std::span<const Segment> segments) {
    std::vector<std::vector<bool>> out(segments.size());
    if (const auto* model = std::get_if<BaselineModel>(&handle)) {
        for (std::size_t s = 0; s < segments.size(); ++s) out[s] = model->predict(segments[s]);
        return out;
    }
    const auto& client = std::get<ExternalClassifier>(handle);
    // Segments of many short sentences can exceed the per-request limit; such
    // segments go out as consecutive requests.
    std::vector<std::vector<std::string>> batches;
    std::vector<std::size_t> owner;
    batches.reserve(segments.size());
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const auto& texts = segments[s].texts;
        for (std::size_t i = 0; i < texts.size(); i += kMaxSentencesPerRequest) {
            const auto end = std::min(texts.size(), i + kMaxSentencesPerRequest);
            batches.emplace_back(texts.begin() + static_cast<std::ptrdiff_t>(i),
                                 texts.begin() + static_cast<std::ptrdiff_t>(end));
            owner.push_back(s);
        }
    }
    auto replies = client.classify_many(batches);
    for (std::size_t b = 0; b < batches.size(); ++b) {
        auto& dst = out[owner[b]];
        dst.insert(dst.end(), replies[b].labels.begin(), replies[b].labels.end());
    }
    return out;
}

}  // namespace govmine::institutional
