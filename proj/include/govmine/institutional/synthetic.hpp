#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "govmine/ingest/records.hpp"

namespace govmine::institutional {

/// Template-based generator of governance-like sentences. Positive sentences
/// always contain "must" or "vote"; negative sentences never do.
class SentenceSynth {
public:
    explicit SentenceSynth(std::uint64_t seed) : rng_(seed) {}

    std::string positive();
    std::string negative();
    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Labeled synthetic emails: `sentence_count` sentences in total, exactly
/// round(positive_rate * sentence_count) of them positive, spread over
/// threads of 1-4 emails with 3-8 sentences each.
std::vector<ingest::Email> synthetic_labeled_emails(std::size_t sentence_count, double positive_rate,
                                                    std::uint64_t seed);

}  // namespace govmine::institutional
