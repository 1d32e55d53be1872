#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace govmine::topics {

/// Bag-of-words corpus: documents are sequences of vocabulary ids.
struct Corpus {
    std::vector<std::string> vocabulary;
    std::vector<std::vector<int>> docs;

    std::size_t token_count() const;
    /// Number of documents containing each term.
    std::vector<std::size_t> document_frequency() const;
};

struct PreprocessOptions {
    std::size_t min_token_length = 3;
    std::size_t min_count = 5;
    double max_doc_fraction = 0.5;
};

/// Lowercased word tokens of `text` (letters, digits and inner apostrophes).
std::vector<std::string> word_tokens(std::string_view text);

/// Parses a whitespace-separated stopword list.
std::set<std::string, std::less<>> parse_stopwords(std::string_view text);
const std::set<std::string, std::less<>>& default_stopwords();

/// One document per sentence. Tokens shorter than min_token_length, stopwords
/// and tokens without a letter are removed; then terms with fewer than
/// min_count occurrences or present in more than max_doc_fraction of the
/// documents are dropped. Vocabulary is sorted. Documents left empty are
/// kept, so document i always corresponds to sentence i. Throws
/// PreconditionError on an empty sentence set.
Corpus preprocess(std::span<const std::string> sentences, const PreprocessOptions& options = {},
                  const std::set<std::string, std::less<>>& stopwords = default_stopwords());

}  // namespace govmine::topics
