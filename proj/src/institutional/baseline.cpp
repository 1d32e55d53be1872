#include "govmine/institutional/baseline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <string_view>

#include "govmine/core/error.hpp"
#include "govmine/institutional/tokenizer.hpp"

namespace govmine::institutional {

namespace {

std::uint64_t fnv1a(std::string_view prefix, std::string_view token) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : prefix) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    h ^= 0x1f;
    h *= 1099511628211ull;
    for (char c : token) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<std::string> words(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || c == '\'' || c >= 0x80) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// Deontic markers; matched as word prefixes so inflections count.
constexpr std::array<std::string_view, 6> kLexicon{"must", "shall", "vote", "require", "polic", "licen"};
// Marker hits would otherwise be drowned by the n-gram features after
// normalization.
constexpr double kLexiconWeight = 3.0;
constexpr std::array<std::string_view, 11> kModals{"must",  "shall", "should", "may",  "might", "can",
                                                   "could", "will",  "would",  "ought", "need"};

class FeatureBuilder {
public:
    explicit FeatureBuilder(int hash_bits) : mask_((1u << hash_bits) - 1) {}

    void add(std::string_view prefix, std::string_view token, double value = 1.0) {
        raw_.emplace_back(static_cast<std::uint32_t>(fnv1a(prefix, token) & mask_), value);
    }

    FeatureVector finish() {
        std::sort(raw_.begin(), raw_.end());
        FeatureVector merged;
        for (const auto& [i, v] : raw_) {
            if (!merged.empty() && merged.back().first == i)
                merged.back().second += v;
            else
                merged.emplace_back(i, v);
        }
        double norm = 0;
        for (const auto& [i, v] : merged) norm += v * v;
        if (norm > 0) {
            norm = std::sqrt(norm);
            for (auto& [i, v] : merged) v /= norm;
        }
        return merged;
    }

private:
    std::uint32_t mask_;
    std::vector<std::pair<std::uint32_t, double>> raw_;
};

double log1p_exp_neg(double margin) {
    // log(1 + exp(-margin)), stable for both signs.
    return margin > 0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
}

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

FeatureVector sentence_features(const Segment& segment, std::size_t k, int hash_bits) {
    FeatureBuilder fb(hash_bits);
    const auto w = words(segment.texts.at(k));
    for (std::size_t i = 0; i < w.size(); ++i) {
        fb.add("w", w[i]);
        if (i + 1 < w.size()) fb.add("b", w[i] + " " + w[i + 1]);
    }
    if (k > 0)
        for (const auto& t : words(segment.texts[k - 1])) fb.add("L", t);
    else
        fb.add("pos", "first");
    if (k + 1 < segment.texts.size())
        for (const auto& t : words(segment.texts[k + 1])) fb.add("R", t);
    else
        fb.add("pos", "last");

    int modal_count = 0;
    for (const auto& t : w) {
        for (auto stem : kLexicon)
            if (t.rfind(stem, 0) == 0) fb.add("lex", stem, kLexiconWeight);
        for (auto m : kModals)
            if (t == m) ++modal_count;
    }
    if (modal_count > 0) fb.add("modal", "count", static_cast<double>(modal_count));
    const int len = EstimateTokenizer::word_tokens(segment.texts[k]);
    fb.add("len", std::to_string(static_cast<int>(std::log2(len + 1))));
    return fb.finish();
}

double BaselineModel::probability(const Segment& segment, std::size_t k) const {
    double z = bias_;
    for (const auto& [i, v] : sentence_features(segment, k, options_.hash_bits)) z += weights_[i] * v;
    return sigmoid(z);
}

std::vector<bool> BaselineModel::predict(const Segment& segment) const {
    std::vector<bool> out(segment.size());
    for (std::size_t k = 0; k < segment.size(); ++k) out[k] = probability(segment, k) >= options_.threshold;
    return out;
}

BaselineModel train_baseline(std::span<const Segment> segments, std::uint64_t seed, const BaselineOptions& options) {
    if (segments.empty()) throw PreconditionError("cannot train on zero segments");
    if (options.hash_bits < 4 || options.hash_bits > 26) throw PreconditionError("hash_bits out of range");

    std::vector<FeatureVector> x;
    std::vector<double> y;  // +1 / -1
    for (const auto& seg : segments) {
        if (seg.labels.size() != seg.size()) throw PreconditionError("training segment without gold labels");
        for (std::size_t k = 0; k < seg.size(); ++k) {
            x.push_back(sentence_features(seg, k, options.hash_bits));
            y.push_back(seg.labels[k] ? 1.0 : -1.0);
        }
    }
    if (std::all_of(x.begin(), x.end(), [&](const FeatureVector& f) { return f == x.front(); }))
        throw PreconditionError("degenerate feature matrix: every example is identical");

    BaselineModel model;
    model.options_ = options;
    model.seed_ = seed;
    const std::size_t dim = std::size_t{1} << options.hash_bits;
    model.weights_.assign(dim, 0.0);
    auto& w = model.weights_;
    double& b = model.bias_;
    const double n = static_cast<double>(x.size());

    // Diagonal majorizer of the logistic Hessian: x x^T <= diag(|x| * ||x||_1),
    // so per-coordinate steps 1 / (D_ii + l2) never increase the objective.
    std::vector<double> curvature(dim, 0.0);
    double curvature_b = 0;
    for (const auto& f : x) {
        double l1 = 1.0;  // bias input
        for (const auto& [i, v] : f) l1 += std::abs(v);
        curvature_b += 0.25 * l1 / n;
        for (const auto& [i, v] : f) curvature[i] += 0.25 * std::abs(v) * l1 / n;
    }
    std::vector<double> step(dim);
    for (std::size_t i = 0; i < dim; ++i) step[i] = 1.0 / (curvature[i] + options.l2);
    const double step_b = 1.0 / curvature_b;

    std::vector<double> margin(x.size());
    auto objective = [&] {
        double loss = 0;
        for (std::size_t e = 0; e < x.size(); ++e) {
            double z = b;
            for (const auto& [i, v] : x[e]) z += w[i] * v;
            margin[e] = y[e] * z;
            loss += log1p_exp_neg(margin[e]);
        }
        double reg = 0;
        for (double wi : w) reg += wi * wi;
        return loss / n + 0.5 * options.l2 * reg;
    };

    std::vector<double> grad(dim);
    double loss = objective();
    model.loss_history_.push_back(loss);
    for (int epoch = 0; epoch < options.max_epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0;
        for (std::size_t e = 0; e < x.size(); ++e) {
            const double g = -y[e] * sigmoid(-margin[e]) / n;
            grad_b += g;
            for (const auto& [i, v] : x[e]) grad[i] += g * v;
        }
        for (std::size_t i = 0; i < dim; ++i) w[i] -= step[i] * (grad[i] + options.l2 * w[i]);
        b -= step_b * grad_b;
        const double next = objective();
        model.loss_history_.push_back(next);
        const double rel = std::abs(loss - next) / std::max(std::abs(loss), 1e-300);
        loss = next;
        if (rel < options.relative_tolerance) break;
    }
    return model;
}

nlohmann::json BaselineModel::to_json() const {
    nlohmann::json sparse = nlohmann::json::array();
    for (std::size_t i = 0; i < weights_.size(); ++i)
        if (weights_[i] != 0.0) sparse.push_back({i, weights_[i]});
    return {{"kind", "baseline"},
            {"hash_bits", options_.hash_bits},
            {"l2", options_.l2},
            {"max_epochs", options_.max_epochs},
            {"relative_tolerance", options_.relative_tolerance},
            {"threshold", options_.threshold},
            {"seed", seed_},
            {"epochs_run", loss_history_.empty() ? 0 : loss_history_.size() - 1},
            {"final_loss", loss_history_.empty() ? 0.0 : loss_history_.back()},
            {"bias", bias_},
            {"weights", std::move(sparse)}};
}

BaselineModel BaselineModel::from_json(const nlohmann::json& j) {
    if (j.value("kind", std::string()) != "baseline") throw Error("not a baseline model file");
    BaselineModel m;
    m.options_.hash_bits = j.at("hash_bits").get<int>();
    m.options_.l2 = j.at("l2").get<double>();
    m.options_.max_epochs = j.value("max_epochs", 200);
    m.options_.relative_tolerance = j.value("relative_tolerance", 1e-6);
    m.options_.threshold = j.at("threshold").get<double>();
    m.seed_ = j.value("seed", std::uint64_t{0});
    m.bias_ = j.at("bias").get<double>();
    m.weights_.assign(std::size_t{1} << m.options_.hash_bits, 0.0);
    for (const auto& entry : j.at("weights")) {
        auto i = entry.at(0).get<std::size_t>();
        if (i >= m.weights_.size()) throw Error("weight index out of range in model file");
        m.weights_[i] = entry.at(1).get<double>();
    }
    return m;
}

void BaselineModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << to_json().dump() << '\n';
}

BaselineModel BaselineModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    return from_json(nlohmann::json::parse(in));
}

}  // namespace govmine::institutional
