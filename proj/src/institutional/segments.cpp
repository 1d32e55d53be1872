#include "govmine/institutional/segments.hpp"

#include <algorithm>
#include <random>

#include "govmine/core/error.hpp"
#include "govmine/core/random.hpp"
#include "govmine/core/text.hpp"
#include "govmine/ingest/sentences.hpp"
#include "govmine/institutional/tokenizer.hpp"

namespace govmine::institutional {

bool Segment::has_positive() const {
    return std::any_of(labels.begin(), labels.end(), [](bool b) { return b; });
}

std::vector<Segment> segment_email(std::span<const ingest::SentenceRecord> sentences, int token_budget) {
    std::vector<Segment> out;
    const std::size_t n = sentences.size();
    const bool labeled = std::all_of(sentences.begin(), sentences.end(),
                                     [](const ingest::SentenceRecord& s) { return s.gold_label.has_value(); });
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t last = i;
        int total = sentences[i].token_count;
        while (last + 1 < n && total + sentences[last + 1].token_count <= token_budget) {
            ++last;
            total += sentences[last].token_count;
        }
        if (!out.empty() && out.back().last == n - 1 && last == n - 1) break;
        Segment seg;
        seg.email_id = sentences[i].email_id;
        seg.first = i;
        seg.last = last;
        seg.total_tokens = total;
        for (std::size_t k = i; k <= last; ++k) {
            seg.texts.push_back(sentences[k].text);
            if (labeled) seg.labels.push_back(*sentences[k].gold_label);
        }
        out.push_back(std::move(seg));
    }
    return out;
}

std::vector<bool> aggregate_predictions(std::span<const Segment> segments,
                                        std::span<const std::vector<bool>> predictions, std::size_t sentence_count) {
    if (segments.size() != predictions.size())
        throw ConsistencyError("segment/prediction count mismatch");
    std::vector<bool> label(sentence_count, false);
    std::vector<bool> covered(sentence_count, false);
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const auto& seg = segments[s];
        if (predictions[s].size() != seg.size())
            throw ConsistencyError("segment " + std::to_string(s) + " of " + seg.email_id +
                                   " has a prediction vector of the wrong length");
        if (seg.last >= sentence_count)
            throw ConsistencyError("segment " + std::to_string(s) + " extends past the email's sentences");
        for (std::size_t k = 0; k < seg.size(); ++k) {
            covered[seg.first + k] = true;
            if (predictions[s][k]) label[seg.first + k] = true;
        }
    }
    for (std::size_t i = 0; i < sentence_count; ++i)
        if (!covered[i]) throw ConsistencyError("sentence " + std::to_string(i) + " is not covered by any segment");
    return label;
}

std::vector<Segment> oversample_training(std::span<const Segment> segments, std::uint64_t seed) {
    std::vector<std::size_t> positives;
    std::size_t negatives = 0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (segments[i].labels.empty()) throw PreconditionError("oversampling requires gold labels");
        if (segments[i].has_positive())
            positives.push_back(i);
        else
            ++negatives;
    }
    if (positives.empty()) throw PreconditionError("no positive-containing segment: training set is untrainable");
    std::vector<Segment> out(segments.begin(), segments.end());
    if (positives.size() >= negatives) return out;
    rnd::Engine rng(seed);
    for (std::size_t extra = negatives - positives.size(); extra > 0; --extra)
        out.push_back(segments[positives[rnd::index(rng, positives.size())]]);
    return out;
}

std::vector<Segment> policy_segments(std::string_view policies_text, std::string_view id_prefix) {
    std::vector<Segment> out;
    std::string block;
    EstimateTokenizer tokenizer;
    auto flush = [&] {
        if (text::trim(block).empty()) {
            block.clear();
            return;
        }
        auto id = std::string(id_prefix) + "-" + std::to_string(out.size());
        auto sentences = ingest::split_sentences(block, id);
        Segment seg;
        seg.email_id = id;
        seg.first = 0;
        seg.last = sentences.size() - 1;
        for (auto& s : sentences) {
            seg.total_tokens += tokenizer.count(s.text);
            seg.texts.push_back(std::move(s.text));
            seg.labels.push_back(true);
        }
        out.push_back(std::move(seg));
        block.clear();
    };
    for (auto line : text::split_lines(policies_text)) {
        if (text::trim(line).empty()) {
            flush();
            continue;
        }
        if (line.front() == '#') continue;
        block.append(line);
        block.push_back('\n');
    }
    flush();
    return out;
}

}  // namespace govmine::institutional
