#include "govmine/institutional/tokenizer.hpp"

#include <cctype>

namespace govmine::institutional {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

}  // namespace

int EstimateTokenizer::word_tokens(std::string_view text) {
    int n = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        auto c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            ++i;
        } else if (is_word_byte(c)) {
            while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
            ++n;
        } else {
            ++i;
            ++n;
        }
    }
    return n;
}

int EstimateTokenizer::count(std::string_view text) const {
    const int n = word_tokens(text);
    return (13 * n + 9) / 10;  // ceil(1.3 n)
}

void assign_token_counts(std::span<ingest::SentenceRecord> sentences, const Tokenizer& tokenizer) {
    for (auto& s : sentences) s.token_count = tokenizer.count(s.text);
}

}  // namespace govmine::institutional
