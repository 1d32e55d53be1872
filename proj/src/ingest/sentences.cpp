#include "govmine/ingest/sentences.hpp"

#include <array>
#include <cctype>
#include <set>
#include <string>

#include "govmine/core/text.hpp"

namespace govmine::ingest {

namespace {

const std::set<std::string, std::less<>>& abbreviations() {
    static const std::set<std::string, std::less<>> abbrevs{
        "e.g", "i.e",  "cf",   "vs",   "viz", "al",   "approx", "mr",  "mrs", "ms",   "dr",  "prof", "sr",
        "jr",  "st",   "no",   "nos",  "fig", "figs", "eq",     "ca",  "inc", "ltd",  "co",  "corp", "dept",
        "est", "jan",  "feb",  "mar",  "apr", "jun",  "jul",    "aug", "sep", "sept", "oct", "nov",  "dec",
        "mon", "tue",  "wed",  "thu",  "fri", "sat",  "sun",    "p.s", "a.m", "p.m",  "u.s", "resp", "incl",
        "min", "max",  "ver",  "e.v",  "w.r.t", "pp", "vol",    "ed",  "eds", "op",   "sec"};
    return abbrevs;
}

// Abbreviations that also commonly end sentences; split only before an uppercase letter.
const std::set<std::string, std::less<>>& ambiguous_abbreviations() {
    static const std::set<std::string, std::less<>> a{"etc", "al"};
    return a;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}'; }

// Word immediately preceding position `dot` (letters, digits and inner dots).
std::string_view word_before(std::string_view body, std::size_t dot) {
    std::size_t start = dot;
    while (start > 0) {
        char c = body[start - 1];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '.') --start;
        else break;
    }
    auto w = body.substr(start, dot - start);
    while (!w.empty() && w.front() == '.') w.remove_prefix(1);
    return w;
}

bool at_line_start(std::string_view body, std::size_t word_start) {
    std::size_t i = word_start;
    while (i > 0 && (body[i - 1] == ' ' || body[i - 1] == '\t')) --i;
    return i == 0 || body[i - 1] == '\n';
}

bool suppress_split(std::string_view body, std::size_t dot, std::size_t next_char) {
    auto w = word_before(body, dot);
    if (w.empty()) return false;
    const std::string lower = text::to_lower(w);
    if (abbreviations().count(lower)) return true;
    if (ambiguous_abbreviations().count(lower))
        return next_char < body.size() && !std::isupper(static_cast<unsigned char>(body[next_char]));
    // Initials ("J. Smith") and dotted acronyms ("U.S.A").
    if (w.size() == 1 && std::isupper(static_cast<unsigned char>(w[0]))) return true;
    if (w.find('.') != std::string_view::npos && w.size() <= 8) {
        bool letters_and_dots = true;
        for (char c : w) letters_and_dots &= std::isalpha(static_cast<unsigned char>(c)) || c == '.';
        if (letters_and_dots) return true;
    }
    // Enumerators at line start ("1. Build the release").
    bool digits = true;
    for (char c : w) digits &= std::isdigit(static_cast<unsigned char>(c)) != 0;
    if (digits && at_line_start(body, dot - w.size())) return true;
    return false;
}

// "1. ", "2) ", "- ", "* " at the start of a line.
bool list_marker_at(std::string_view body, std::size_t i) {
    if (i >= body.size()) return false;
    if (body[i] == '-' || body[i] == '*') return i + 1 < body.size() && body[i + 1] == ' ';
    std::size_t j = i;
    while (j < body.size() && std::isdigit(static_cast<unsigned char>(body[j]))) ++j;
    if (j == i || j - i > 3 || j + 1 >= body.size()) return false;
    return (body[j] == '.' || body[j] == ')') && body[j + 1] == ' ';
}

std::string normalize_whitespace(std::string_view s) {
    std::string out;
    bool space = false;
    for (char c : text::trim(s)) {
        if (is_space(c)) {
            space = true;
            continue;
        }
        if (space) out.push_back(' ');
        space = false;
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::vector<SentenceRecord> split_sentences(std::string_view body, std::string_view email_id) {
    std::vector<std::size_t> cuts;  // start offsets of sentences 2..n
    bool has_content = false;
    std::size_t i = 0;
    auto next_non_space = [&](std::size_t from) {
        while (from < body.size() && is_space(body[from])) ++from;
        return from;
    };
    while (i < body.size()) {
        char c = body[i];
        if (is_terminal(c) && has_content) {
            std::size_t j = i;
            while (j < body.size() && is_terminal(body[j])) ++j;
            const bool single_period = c == '.' && j == i + 1;
            while (j < body.size() && is_closer(body[j])) ++j;
            if (j >= body.size() || is_space(body[j])) {
                std::size_t next = next_non_space(j);
                if (next < body.size() && !(single_period && suppress_split(body, i, next))) {
                    cuts.push_back(next);
                    has_content = false;
                    i = next;
                    continue;
                }
            }
            i = j;
            continue;
        }
        if (c == '\n' && has_content) {
            // Blank line or a list item ends the current sentence.
            std::size_t j = i + 1;
            while (j < body.size() && (body[j] == ' ' || body[j] == '\t' || body[j] == '\r')) ++j;
            if (list_marker_at(body, j)) {
                cuts.push_back(j);
                has_content = false;
                i = j;
                continue;
            }
            if (j < body.size() && body[j] == '\n') {
                std::size_t next = next_non_space(j);
                if (next < body.size()) {
                    cuts.push_back(next);
                    has_content = false;
                    i = next;
                    continue;
                }
            }
        }
        if (!is_space(c)) has_content = true;
        ++i;
    }

    std::vector<SentenceRecord> out;
    if (text::trim(body).empty()) return out;
    std::size_t begin = 0;
    cuts.push_back(body.size());
    for (std::size_t end : cuts) {
        if (end <= begin) continue;
        auto normalized = normalize_whitespace(body.substr(begin, end - begin));
        if (normalized.empty()) {
            // Whitespace-only tail: fold into the previous sentence.
            if (!out.empty()) out.back().end = end;
            begin = end;
            continue;
        }
        SentenceRecord s;
        s.email_id = std::string(email_id);
        s.index = out.size();
        s.text = std::move(normalized);
        s.begin = begin;
        s.end = end;
        out.push_back(std::move(s));
        begin = end;
    }
    return out;
}

}  // namespace govmine::ingest
