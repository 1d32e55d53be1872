#include "govmine/institutional/annotations.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include <json.hpp>

#include "govmine/core/error.hpp"
#include "govmine/core/random.hpp"
#include "govmine/ingest/threads.hpp"

namespace govmine::institutional {

using nlohmann::json;

GoldAnnotations read_gold_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot read gold annotations " + path.string());
    GoldAnnotations gold;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto j = json::parse(line);
            const auto& l = j.at("label");
            const bool label = l.is_boolean() ? l.get<bool>() : l.get<int>() != 0;
            gold[j.at("email_id").get<std::string>()][j.at("sentence_index").get<std::size_t>()] = label;
        } catch (const json::exception& e) {
            throw IngestError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return gold;
}

void write_gold_jsonl(const std::filesystem::path& path, const GoldAnnotations& gold) {
    std::ofstream out(path);
    if (!out) throw IngestError("cannot write " + path.string());
    for (const auto& [id, labels] : gold)
        for (const auto& [idx, label] : labels)
            out << json{{"email_id", id}, {"sentence_index", idx}, {"label", label ? 1 : 0}}.dump() << '\n';
}

std::size_t apply_gold(std::span<ingest::Email> emails, const GoldAnnotations& gold) {
    std::size_t complete = 0;
    for (auto& e : emails) {
        auto it = gold.find(e.message_id);
        if (it == gold.end()) continue;
        std::size_t labeled = 0;
        for (auto& s : e.sentences) {
            auto l = it->second.find(s.index);
            if (l == it->second.end()) continue;
            s.gold_label = l->second;
            ++labeled;
        }
        if (labeled == e.sentences.size() && labeled > 0) ++complete;
    }
    return complete;
}

void write_predictions_jsonl(const std::filesystem::path& path, std::span<const ingest::Email> emails,
                             const std::map<std::string, std::vector<bool>>& predictions) {
    std::ofstream out(path);
    if (!out) throw IngestError("cannot write " + path.string());
    for (const auto& e : emails) {
        auto it = predictions.find(e.message_id);
        if (it == predictions.end()) continue;
        for (std::size_t i = 0; i < it->second.size(); ++i) {
            json j{{"email_id", e.message_id}, {"sentence_index", i}, {"predicted", it->second[i] ? 1 : 0}};
            if (i < e.sentences.size() && e.sentences[i].gold_label) j["label"] = *e.sentences[i].gold_label ? 1 : 0;
            out << j.dump() << '\n';
        }
    }
}

ThreadSplit split_by_thread(std::span<const ingest::Email> emails, double holdout_fraction, std::uint64_t seed) {
    if (!(holdout_fraction > 0 && holdout_fraction < 1))
        throw PreconditionError("holdout fraction must lie in (0, 1)");
    const auto roots = ingest::thread_roots(emails);
    const std::set<std::string> uniq(roots.begin(), roots.end());
    std::vector<std::string> threads(uniq.begin(), uniq.end());
    std::mt19937_64 rng(seed);
    rnd::shuffle(threads.begin(), threads.end(), rng);
    auto n_test = static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(threads.size())));
    if (threads.size() >= 2) n_test = std::clamp<std::size_t>(n_test, 1, threads.size() - 1);
    else n_test = 0;
    const std::set<std::string> held(threads.begin(), threads.begin() + static_cast<std::ptrdiff_t>(n_test));
    ThreadSplit split;
    for (std::size_t i = 0; i < emails.size(); ++i) (held.count(roots[i]) ? split.test : split.train).push_back(i);
    return split;
}

}  // namespace govmine::institutional
