#include "govmine/institutional/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>

#include "govmine/core/error.hpp"
#include "govmine/core/random.hpp"
#include "govmine/ingest/sentences.hpp"
#include "govmine/institutional/tokenizer.hpp"

namespace govmine::institutional {

namespace {

constexpr std::array<std::string_view, 10> kActors{
    "committers", "the PPMC", "release managers", "all contributors", "mentors",
    "new committers", "the podling", "reviewers", "every patch author", "the project"};
constexpr std::array<std::string_view, 10> kObjects{
    "the release candidate", "the incubator report", "the contributor agreement", "the build scripts",
    "the website", "the issue tracker", "the documentation", "the dependency list",
    "the source headers", "the download page"};
constexpr std::array<std::string_view, 8> kPositive{
    "{A} must sign {O} before it is published.",
    "We should call a vote on {O} this week.",
    "Please vote on {O} before Friday.",
    "{A} must review {O} prior to any merge.",
    "The vote on {O} stays open for three days.",
    "According to the policy, {A} must update {O}.",
    "Any change to {O} requires a formal vote by {A}.",
    "{A} must not modify {O} without consensus."};
constexpr std::array<std::string_view, 10> kNegative{
    "I pushed a small fix for {O} yesterday.",
    "Thanks for looking into {O} so quickly.",
    "The nightly build of {O} looks green again.",
    "Has anyone seen the flaky test in {O}?",
    "I will be travelling next week, so replies may be slow.",
    "{A} discussed {O} at the meetup.",
    "Here is a patch that cleans up {O}.",
    "I think {O} could use a few more examples.",
    "Great work on {O}, everyone!",
    "The logs for {O} are attached below."};
constexpr std::array<std::string_view, 8> kSenders{
    "alice@example.org", "bob@example.org", "carol@example.org", "dave@example.org",
    "erin@example.org",  "frank@example.org", "grace@example.org", "heidi@example.org"};

template <std::size_t N>
std::string_view pick(const std::array<std::string_view, N>& a, std::mt19937_64& rng) {
    return a[rnd::index(rng, N)];
}

std::string fill(std::string_view tmpl, std::mt19937_64& rng) {
    std::string out;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl[i] == '{' && i + 2 < tmpl.size() && tmpl[i + 2] == '}') {
            const bool at_start = out.empty();
            std::string word(tmpl[i + 1] == 'A' ? pick(kActors, rng) : pick(kObjects, rng));
            if (at_start && word[0] >= 'a' && word[0] <= 'z') word[0] = static_cast<char>(word[0] - 'a' + 'A');
            out += word;
            i += 2;
        } else {
            out += tmpl[i];
        }
    }
    return out;
}

}  // namespace

std::string SentenceSynth::positive() { return fill(pick(kPositive, rng_), rng_); }
std::string SentenceSynth::negative() { return fill(pick(kNegative, rng_), rng_); }

std::vector<ingest::Email> synthetic_labeled_emails(std::size_t sentence_count, double positive_rate,
                                                    std::uint64_t seed) {
    if (!(positive_rate >= 0 && positive_rate <= 1)) throw PreconditionError("positive rate must lie in [0, 1]");
    SentenceSynth synth(seed);
    auto& rng = synth.rng();
    const auto n_pos = static_cast<std::size_t>(std::llround(positive_rate * static_cast<double>(sentence_count)));
    std::vector<bool> labels(sentence_count, false);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n_pos), true);
    rnd::shuffle(labels.begin(), labels.end(), rng);

    const EstimateTokenizer tokenizer;
    const Timestamp origin = make_timestamp(CivilDate{2020, 1, 1});
    std::vector<ingest::Email> emails;
    std::size_t next = 0;
    std::size_t thread = 0;
    while (next < sentence_count) {
        const auto thread_len = rnd::between(rng, 1, 4);
        std::optional<std::string> parent;
        for (int k = 0; k < thread_len && next < sentence_count; ++k) {
            const auto want = static_cast<std::size_t>(rnd::between(rng, 3, 8));
            const auto n = std::min(want, sentence_count - next);
            ingest::Email e;
            e.message_id = "synthetic-" + std::to_string(seed) + "-" + std::to_string(emails.size()) + "@govmine.invalid";
            e.project_id = "synthetic";
            e.list_name = "dev";
            e.sent_at = origin + std::chrono::hours(6 * static_cast<long>(emails.size()));
            e.sender = std::string(pick(kSenders, rng));
            e.sender_raw = e.sender;
            e.subject = (parent ? "Re: thread " : "thread ") + std::to_string(thread);
            e.in_reply_to = parent;
            e.parent_id = parent;
            if (parent) e.references.push_back(*parent);
            for (std::size_t i = 0; i < n; ++i) {
                if (i) e.body += ' ';
                e.body += labels[next + i] ? synth.positive() : synth.negative();
            }
            e.sentences = ingest::split_sentences(e.body, e.message_id);
            if (e.sentences.size() != n)
                throw ConsistencyError("synthetic email split into " + std::to_string(e.sentences.size()) +
                                       " sentences, expected " + std::to_string(n));
            for (std::size_t i = 0; i < n; ++i) e.sentences[i].gold_label = labels[next + i];
            assign_token_counts(e.sentences, tokenizer);
            next += n;
            parent = e.message_id;
            emails.push_back(std::move(e));
        }
        ++thread;
    }
    return emails;
}

}  // namespace govmine::institutional
