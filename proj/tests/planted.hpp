#pragma once

// Seeded generators with known structure.

#include <string>
#include <vector>

#include "govmine/core/random.hpp"

namespace govmine::testing {

/// Word j of planted topic k: disjoint letter-only vocabularies.
inline std::string planted_word(int k, int j) {
    return std::string("top") + static_cast<char>('a' + k) + "word" + static_cast<char>('a' + j);
}

struct PlantedCorpus {
    std::vector<std::string> sentences;
    std::vector<int> topic;  // planted topic of each sentence
};

/// `docs` sentences, each drawing 8-16 tokens uniformly from the 20-word
/// vocabulary of one planted topic (topics assigned round-robin).
inline PlantedCorpus planted_corpus(int topics, int docs, std::uint64_t seed, int vocab = 20) {
    rnd::Engine rng(seed);
    PlantedCorpus out;
    for (int d = 0; d < docs; ++d) {
        const int k = d % topics;
        const auto len = rnd::between(rng, 8, 16);
        std::string s;
        for (int i = 0; i < len; ++i) {
            if (i) s += ' ';
            s += planted_word(k, static_cast<int>(rnd::index(rng, static_cast<std::size_t>(vocab))));
        }
        out.sentences.push_back(s + ".");
        out.topic.push_back(k);
    }
    return out;
}

/// Planted topic of a vocabulary word, or -1.
inline int planted_topic_of(const std::string& word) {
    if (word.size() != 9 || word.compare(0, 3, "top") != 0) return -1;
    return word[3] - 'a';
}

}  // namespace govmine::testing
