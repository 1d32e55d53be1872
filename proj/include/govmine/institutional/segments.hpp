#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "govmine/ingest/records.hpp"

namespace govmine::institutional {

inline constexpr int kDefaultTokenBudget = 256;

/// A window of consecutive sentences [first, last] of one email.
struct Segment {
    std::string email_id;
    std::size_t first = 0;
    std::size_t last = 0;  // inclusive
    int total_tokens = 0;
    std::vector<std::string> texts;  // sentence texts, first..last
    std::vector<bool> labels;        // gold labels when known, else empty

    std::size_t size() const { return last - first + 1; }
    bool has_positive() const;
};

/// Sliding windows over an email's sentences. Each window is the maximal run
/// starting at sentence i whose token sum fits the budget; a sentence over the
/// budget forms a singleton. Once a window reaches the last sentence, later
/// (contained) windows are omitted. Gold labels are copied when every
/// sentence has one.
std::vector<Segment> segment_email(std::span<const ingest::SentenceRecord> sentences,
                                   int token_budget = kDefaultTokenBudget);

/// Sentence label = OR over the segments containing it. `predictions[s][k]`
/// is the label of sentence segments[s].first + k. Throws ConsistencyError if
/// a sentence is not covered or a prediction vector has the wrong size.
std::vector<bool> aggregate_predictions(std::span<const Segment> segments,
                                        std::span<const std::vector<bool>> predictions, std::size_t sentence_count);

/// Duplicates positive-containing segments, uniformly at random with
/// replacement, until they match the all-negative segments 1:1. Returns the
/// input unchanged when positives already match or exceed negatives. Throws
/// PreconditionError when no segment has a positive label.
std::vector<Segment> oversample_training(std::span<const Segment> segments, std::uint64_t seed);

/// Policy texts: blocks separated by blank lines; each block becomes one
/// all-positive segment (no token budget).
std::vector<Segment> policy_segments(std::string_view policies_text, std::string_view id_prefix = "policy");

}  // namespace govmine::institutional
