#pragma once

#include <span>
#include <string_view>

#include "govmine/ingest/records.hpp"

namespace govmine::institutional {

/// Counts subword tokens of a sentence.
class Tokenizer {
public:
    virtual ~Tokenizer() = default;
    virtual int count(std::string_view text) const = 0;
};

/// Wordpiece estimate without a model vocabulary: regex-style word and
/// punctuation tokens, times 1.3, rounded up.
class EstimateTokenizer final : public Tokenizer {
public:
    int count(std::string_view text) const override;

    /// Raw word/punctuation token count before scaling.
    static int word_tokens(std::string_view text);
};

void assign_token_counts(std::span<ingest::SentenceRecord> sentences, const Tokenizer& tokenizer);

}  // namespace govmine::institutional
