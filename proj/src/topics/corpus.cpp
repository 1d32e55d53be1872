#include "govmine/topics/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "govmine/core/embedded.hpp"
#include "govmine/core/error.hpp"

namespace govmine::topics {

std::size_t Corpus::token_count() const {
    std::size_t n = 0;
    for (const auto& d : docs) n += d.size();
    return n;
}

std::vector<std::size_t> Corpus::document_frequency() const {
    std::vector<std::size_t> df(vocabulary.size(), 0);
    std::vector<std::size_t> last(vocabulary.size(), static_cast<std::size_t>(-1));
    for (std::size_t d = 0; d < docs.size(); ++d)
        for (int w : docs[d])
            if (last[static_cast<std::size_t>(w)] != d) {
                last[static_cast<std::size_t>(w)] = d;
                ++df[static_cast<std::size_t>(w)];
            }
    return df;
}

std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        while (!cur.empty() && cur.back() == '\'') cur.pop_back();
        std::size_t lead = 0;
        while (lead < cur.size() && cur[lead] == '\'') ++lead;
        if (lead < cur.size()) out.push_back(cur.substr(lead));
        cur.clear();
    };
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || c == '\'' || c >= 0x80) cur += static_cast<char>(std::tolower(c));
        else flush();
    }
    flush();
    return out;
}

std::set<std::string, std::less<>> parse_stopwords(std::string_view text) {
    std::set<std::string, std::less<>> out;
    for (auto& t : word_tokens(text)) out.insert(std::move(t));
    return out;
}

const std::set<std::string, std::less<>>& default_stopwords() {
    static const auto words = parse_stopwords(embedded::stopwords());
    return words;
}

Corpus preprocess(std::span<const std::string> sentences, const PreprocessOptions& options,
                  const std::set<std::string, std::less<>>& stopwords) {
    if (sentences.empty()) throw PreconditionError("topic corpus has no sentences");
    std::vector<std::vector<std::string>> tokens(sentences.size());
    std::map<std::string, std::size_t> count;
    std::map<std::string, std::size_t> df;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        for (auto& t : word_tokens(sentences[i])) {
            if (t.size() < options.min_token_length || stopwords.count(t)) continue;
            if (std::none_of(t.begin(), t.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); }))
                continue;
            tokens[i].push_back(std::move(t));
        }
        for (const auto& t : tokens[i]) ++count[t];
        std::vector<std::string> uniq = tokens[i];
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (const auto& t : uniq) ++df[t];
    }
    const double max_df = options.max_doc_fraction * static_cast<double>(sentences.size());
    Corpus corpus;
    std::map<std::string, int> id;
    for (const auto& [term, n] : count) {
        if (n < options.min_count || static_cast<double>(df[term]) > max_df) continue;
        id.emplace(term, static_cast<int>(corpus.vocabulary.size()));
        corpus.vocabulary.push_back(term);
    }
    corpus.docs.resize(sentences.size());
    for (std::size_t i = 0; i < tokens.size(); ++i)
        for (const auto& t : tokens[i])
            if (auto it = id.find(t); it != id.end()) corpus.docs[i].push_back(it->second);
    return corpus;
}

}  // namespace govmine::topics
