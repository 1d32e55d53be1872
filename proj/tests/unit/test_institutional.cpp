#include <doctest.h>

#include <algorithm>
#include <set>
#include <thread>

#include "govmine/core/error.hpp"
#include "govmine/core/random.hpp"
#include "govmine/core/text.hpp"
#include "govmine/ingest/threads.hpp"
#include "govmine/ingest/sentences.hpp"
#include "govmine/institutional/annotations.hpp"
#include "govmine/institutional/baseline.hpp"
#include "govmine/institutional/classifier.hpp"
#include "govmine/institutional/evaluation.hpp"
#include "govmine/institutional/role_counts.hpp"
#include "govmine/institutional/segments.hpp"
#include "govmine/institutional/synthetic.hpp"
#include "govmine/institutional/tokenizer.hpp"
#include "stub_service.hpp"
#include "test_util.hpp"

using namespace govmine;
using namespace govmine::institutional;
using ingest::Email;
using ingest::SentenceRecord;
using nlohmann::json;

namespace {

std::vector<SentenceRecord> with_counts(const std::vector<int>& counts) {
    std::vector<SentenceRecord> out;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        SentenceRecord s;
        s.email_id = "e";
        s.index = i;
        s.text = "s" + std::to_string(i);
        s.token_count = counts[i];
        out.push_back(s);
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> ranges(const std::vector<Segment>& segs) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& s : segs) out.emplace_back(s.first, s.last);
    return out;
}

Segment labeled_segment(std::string id, std::vector<bool> labels) {
    Segment s;
    s.email_id = std::move(id);
    s.first = 0;
    s.last = labels.size() - 1;
    for (std::size_t i = 0; i < labels.size(); ++i) s.texts.push_back(s.email_id + " sentence " + std::to_string(i));
    s.labels = std::move(labels);
    return s;
}

// Segments and sentence-level gold over a synthetic corpus.
struct Prepared {
    std::vector<Segment> segments;
    std::vector<bool> gold;
};

Prepared prepare(std::vector<Email>& emails) {
    Prepared p;
    const EstimateTokenizer tok;
    for (std::size_t e = 0; e < emails.size(); ++e) {
        assign_token_counts(emails[e].sentences, tok);
        for (auto& s : segment_email(emails[e].sentences)) p.segments.push_back(std::move(s));
        for (const auto& s : emails[e].sentences) p.gold.push_back(*s.gold_label);
    }
    return p;
}

std::vector<bool> predict_sentences(const ClassifierHandle& handle, std::vector<Email>& emails) {
    std::vector<bool> out;
    const EstimateTokenizer tok;
    for (auto& e : emails) {
        assign_token_counts(e.sentences, tok);
        const auto segs = segment_email(e.sentences);
        const auto preds = classify(handle, segs);
        const auto labels = aggregate_predictions(segs, preds, e.sentences.size());
        out.insert(out.end(), labels.begin(), labels.end());
    }
    return out;
}

}  // namespace

TEST_CASE("segmentation examples") {
    CHECK(ranges(segment_email(with_counts({100, 100, 100, 100}), 256)) ==
          std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}, {2, 3}});
    const auto big = segment_email(with_counts({300}), 256);
    REQUIRE(big.size() == 1);
    CHECK(big[0].total_tokens == 300);
    CHECK(ranges(segment_email(with_counts({50, 50, 50}), 256)) ==
          std::vector<std::pair<std::size_t, std::size_t>>{{0, 2}});
    CHECK(segment_email(with_counts({}), 256).empty());
    CHECK(ranges(segment_email(with_counts({10, 300, 10}), 256)) ==
          std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}, {2, 2}});
}

TEST_CASE("segmentation properties on random token counts") {
    rnd::Engine rng(99);
    for (int t = 0; t < 500; ++t) {
        std::vector<int> counts(static_cast<std::size_t>(rnd::between(rng, 1, 40)));
        for (auto& c : counts) c = static_cast<int>(rnd::between(rng, 1, 300));
        const auto segs = segment_email(with_counts(counts), 256);
        REQUIRE_FALSE(segs.empty());
        std::vector<int> cover(counts.size(), 0);
        for (std::size_t k = 0; k < segs.size(); ++k) {
            const auto& s = segs[k];
            int sum = 0;
            for (std::size_t i = s.first; i <= s.last; ++i) {
                sum += counts[i];
                cover[i]++;
            }
            CHECK(sum == s.total_tokens);
            CHECK((s.total_tokens <= 256 || s.size() == 1));
            CHECK(s.first == k);
            if (s.last + 1 < counts.size()) CHECK(s.total_tokens + counts[s.last + 1] > 256);
            CHECK(s.texts.size() == s.size());
        }
        CHECK(segs.back().last == counts.size() - 1);
        for (int c : cover) CHECK(c >= 1);
    }
}

TEST_CASE("aggregation is an OR over covering segments") {
    const auto segs = segment_email(with_counts({100, 100, 100, 100}), 256);
    std::vector<std::vector<bool>> preds{{false, true}, {false, false}, {false, false}};
    CHECK(aggregate_predictions(segs, preds, 4) == std::vector<bool>{false, true, false, false});
    std::vector<std::vector<bool>> none{{false, false}, {false, false}, {false, false}};
    CHECK(aggregate_predictions(segs, none, 4) == std::vector<bool>(4, false));
    const auto one = segment_email(with_counts({5}), 256);
    std::vector<std::vector<bool>> pos{{true}};
    CHECK(aggregate_predictions(one, pos, 1) == std::vector<bool>{true});

    std::vector<std::vector<bool>> wrong{{false}, {false, false}, {false, false}};
    CHECK_THROWS_AS(aggregate_predictions(segs, wrong, 4), ConsistencyError);
    CHECK_THROWS_AS(aggregate_predictions(segs, preds, 5), ConsistencyError);
}

TEST_CASE("flipping unanimous segment predictions flips the aggregate") {
    rnd::Engine rng(12);
    for (int t = 0; t < 200; ++t) {
        std::vector<int> counts(static_cast<std::size_t>(rnd::between(rng, 1, 15)));
        for (auto& c : counts) c = static_cast<int>(rnd::between(rng, 20, 200));
        const auto segs = segment_email(with_counts(counts), 256);
        std::vector<std::vector<bool>> preds;
        for (const auto& s : segs) {
            std::vector<bool> p(s.size());
            for (auto&& b : p) b = rnd::bernoulli(rng, 0.3);
            preds.push_back(p);
        }
        auto flipped = preds;
        for (auto& p : flipped)
            for (auto&& b : p) b = !b;
        const auto a = aggregate_predictions(segs, preds, counts.size());
        const auto b = aggregate_predictions(segs, flipped, counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i) {
            std::set<bool> votes;
            for (std::size_t s = 0; s < segs.size(); ++s)
                if (segs[s].first <= i && i <= segs[s].last) votes.insert(preds[s][i - segs[s].first]);
            if (votes.size() == 1) CHECK(a[i] != b[i]);
        }
    }
}

TEST_CASE("oversampling") {
    auto make = [](int negatives, int positives) {
        std::vector<Segment> v;
        for (int i = 0; i < negatives; ++i) v.push_back(labeled_segment("n" + std::to_string(i), {false, false}));
        for (int i = 0; i < positives; ++i) v.push_back(labeled_segment("p" + std::to_string(i), {false, true}));
        return v;
    };
    auto tally = [](const std::vector<Segment>& v) {
        std::pair<int, int> np{0, 0};
        for (const auto& s : v) (s.has_positive() ? np.second : np.first)++;
        return np;
    };
    const auto a = make(10, 2);
    const auto out = oversample_training(a, 7);
    CHECK(tally(out) == std::pair{10, 10});
    std::multiset<std::string> neg_in, neg_out;
    for (const auto& s : a)
        if (!s.has_positive()) neg_in.insert(s.email_id);
    for (const auto& s : out) {
        if (!s.has_positive()) neg_out.insert(s.email_id);
        else CHECK((s.email_id == "p0" || s.email_id == "p1"));
    }
    CHECK(neg_in == neg_out);
    CHECK(ranges(oversample_training(a, 7)) == ranges(out));

    CHECK(tally(oversample_training(make(5, 5), 1)) == std::pair{5, 5});
    CHECK(tally(oversample_training(make(3, 7), 1)) == std::pair{3, 7});
    CHECK_THROWS_AS(oversample_training(make(4, 0), 1), PreconditionError);
}

TEST_CASE("policy texts become positive segments") {
    const auto segs = policy_segments("Podlings must vote. Releases must be signed.\n\nCommitters shall sign the ICLA.\n");
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].size() == 2);
    CHECK(segs[0].labels == std::vector<bool>{true, true});
    CHECK(segs[1].texts.front() == "Committers shall sign the ICLA.");
    CHECK(policy_segments("").empty());
}

TEST_CASE("token estimates") {
    const EstimateTokenizer tok;
    CHECK(EstimateTokenizer::word_tokens("Hello, world!") == 4);
    CHECK(tok.count("Hello, world!") == 6);
    CHECK(tok.count("x") >= 1);
    std::vector<SentenceRecord> s(2);
    s[0].text = "One two three.";
    s[1].text = "Four";
    assign_token_counts(s, tok);
    CHECK(s[0].token_count == tok.count("One two three."));
    CHECK(s[1].token_count >= 1);
}

TEST_CASE("evaluation") {
    const auto r = evaluate_counts(29, 14, 13, 944);
    CHECK(r.precision == doctest::Approx(29.0 / 43.0).epsilon(1e-15));
    CHECK(r.precision == doctest::Approx(0.674).epsilon(1e-3));
    CHECK(r.recall == doctest::Approx(0.690).epsilon(1e-3));
    CHECK(std::abs(r.f1 - 2 * r.precision * r.recall / (r.precision + r.recall)) <= 1e-12);
    CHECK(std::abs(r.accuracy - (29.0 + 944.0) / 1000.0) <= 1e-12);

    std::vector<bool> gold(100, false), none(100, false);
    for (int i = 0; i < 5; ++i) gold[static_cast<std::size_t>(i * 20)] = true;
    const auto neg = evaluate(gold, none);
    CHECK(neg.precision == 0);
    CHECK(neg.recall == 0);
    CHECK(neg.f1 == 0);
    CHECK(neg.accuracy == doctest::Approx(0.95).epsilon(1e-15));
    const auto perfect = evaluate(gold, gold);
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.f1 == 1.0);
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.to_json().at("tp") == 5);

    rnd::Engine rng(4);
    for (int t = 0; t < 1000; ++t) {
        const auto tp = rnd::index(rng, 50), fp = rnd::index(rng, 50), fn = rnd::index(rng, 50),
                   tn = rnd::index(rng, 500);
        const auto e = evaluate_counts(tp, fp, fn, tn);
        const double total = static_cast<double>(tp + fp + fn + tn);
        if (total > 0) CHECK(std::abs(e.accuracy - static_cast<double>(tp + tn) / total) <= 1e-12);
        if (e.precision + e.recall > 0)
            CHECK(std::abs(e.f1 - 2 * e.precision * e.recall / (e.precision + e.recall)) <= 1e-12);
        else
            CHECK(e.f1 == 0);
        for (double v : {e.precision, e.recall, e.f1, e.accuracy}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("baseline training is deterministic with a non-increasing loss") {
    auto emails = synthetic_labeled_emails(300, 0.1, 5);
    auto p = prepare(emails);
    const auto train = oversample_training(p.segments, 5);
    const auto a = train_baseline(train, 5);
    const auto b = train_baseline(train, 5);
    CHECK(a.weights() == b.weights());
    CHECK(a.bias() == b.bias());
    CHECK(a.seed() == 5);
    const auto& loss = a.loss_history();
    REQUIRE(loss.size() >= 2);
    CHECK(loss.size() <= 201);
    for (std::size_t i = 1; i < loss.size(); ++i) CHECK(loss[i] <= loss[i - 1] + 1e-9);

    const auto back = BaselineModel::from_json(a.to_json());
    CHECK(back.weights() == a.weights());
    CHECK(back.bias() == a.bias());
    for (const auto& s : p.segments) CHECK(back.predict(s) == a.predict(s));

    CHECK_THROWS_AS(train_baseline({}, 1), PreconditionError);
    std::vector<Segment> same{labeled_segment("x", {true}), labeled_segment("x", {false})};
    CHECK_THROWS_AS(train_baseline(same, 1), PreconditionError);
}

TEST_CASE("baseline separates the synthetic corpus") {
    auto train_emails = synthetic_labeled_emails(500, 0.05, 20240117);
    auto test_emails = synthetic_labeled_emails(500, 0.05, 20240118);
    auto p = prepare(train_emails);
    const ClassifierHandle model = train_baseline(oversample_training(p.segments, 1), 1);
    CHECK(kind_of(model) == ClassifierKind::Baseline);
    const auto train_pred = predict_sentences(model, train_emails);
    CHECK(evaluate(p.gold, train_pred).accuracy >= 0.95);
    auto q = prepare(test_emails);
    const auto test_pred = predict_sentences(model, test_emails);
    CHECK(evaluate(q.gold, test_pred).f1 >= 0.95);
}

TEST_CASE("synthetic corpus shape") {
    const auto emails = synthetic_labeled_emails(500, 0.05, 3);
    std::size_t n = 0, pos = 0;
    for (const auto& e : emails) {
        CHECK(e.sentences.size() >= 1);
        CHECK(e.sentences.size() <= 8);
        for (const auto& s : e.sentences) {
            ++n;
            pos += *s.gold_label;
            const bool marker = s.text.find("must") != std::string::npos || s.text.find("vote") != std::string::npos;
            CHECK(marker == *s.gold_label);
        }
    }
    CHECK(n == 500);
    CHECK(pos == 25);
}

TEST_CASE("external classifier against a stub service") {
    testing::StubService stub(testing::StubService::all_negative);
    ExternalClassifier client({stub.endpoint(), 4, std::chrono::seconds(10)});
    CHECK(client.health() == "stub-model-1");

    const auto reply = client.classify_one({"Please vote.", "Thanks all"}, "r1");
    CHECK(reply.labels == std::vector<bool>{false, false});
    CHECK(reply.token_counts == std::vector<int>{2, 2});

    auto emails = synthetic_labeled_emails(200, 0.1, 8);
    const ClassifierHandle handle = client;
    CHECK(kind_of(handle) == ClassifierKind::External);
    const auto pred = predict_sentences(handle, emails);
    CHECK(pred.size() == 200);
    CHECK(std::none_of(pred.begin(), pred.end(), [](bool b) { return b; }));

    CHECK_THROWS_AS(client.classify_one({}, "empty"), ProtocolError);
    std::vector<std::string> too_many(kMaxSentencesPerRequest + 1, "x.");
    CHECK_THROWS_AS(client.classify_one(too_many, "big"), ProtocolError);
}

TEST_CASE("segments over the request limit are split across requests") {
    testing::StubService stub([](const json& req) {
        auto r = testing::StubService::all_negative(req);
        for (std::size_t i = 0; i < r["labels"].size(); ++i)
            r["labels"][i] = req["sentences"][i].get<std::string>().find("must") != std::string::npos;
        return r;
    });
    const ClassifierHandle handle = ExternalClassifier({stub.endpoint(), 2, std::chrono::seconds(10)});
    Segment seg;
    seg.email_id = "long";
    seg.first = 0;
    seg.last = 149;
    for (int i = 0; i < 150; ++i) seg.texts.push_back(i % 7 == 0 ? "You must." : "Ok.");
    const auto preds = classify(handle, std::span<const Segment>(&seg, 1));
    REQUIRE(preds.size() == 1);
    REQUIRE(preds[0].size() == 150);
    for (int i = 0; i < 150; ++i) CHECK(preds[0][static_cast<std::size_t>(i)] == (i % 7 == 0));
    CHECK(stub.requests() == 3);
}

TEST_CASE("protocol violations surface as typed errors") {
    SUBCASE("length mismatch") {
        testing::StubService stub([](const json& req) {
            auto r = testing::StubService::all_negative(req);
            r["labels"].erase(r["labels"].size() - 1);
            return r;
        });
        ExternalClassifier client({stub.endpoint(), 1, std::chrono::seconds(10)});
        CHECK_THROWS_AS(client.classify_one({"a.", "b."}, "r"), ProtocolError);
    }
    SUBCASE("request id mismatch") {
        testing::StubService stub([](const json& req) {
            auto r = testing::StubService::all_negative(req);
            r["request_id"] = "someone-else";
            return r;
        });
        ExternalClassifier client({stub.endpoint(), 1, std::chrono::seconds(10)});
        CHECK_THROWS_AS(client.classify_one({"a."}, "r"), ProtocolError);
    }
    SUBCASE("error object") {
        testing::StubService stub([](const json& req) {
            return json{{"request_id", req.at("request_id")}, {"error", "model not loaded"}};
        });
        ExternalClassifier client({stub.endpoint(), 1, std::chrono::seconds(10)});
        CHECK_THROWS_AS(client.classify_one({"a."}, "r"), ProtocolError);
    }
    SUBCASE("misaligned token counts") {
        testing::StubService stub([](const json& req) {
            auto r = testing::StubService::all_negative(req);
            r["token_counts"] = json::array({1});
            return r;
        });
        ExternalClassifier client({stub.endpoint(), 1, std::chrono::seconds(10)});
        CHECK_THROWS_AS(client.classify_one({"a.", "b."}, "r"), ProtocolError);
    }
    SUBCASE("unreachable endpoint") {
        ExternalClassifier client({"http://127.0.0.1:1", 1, std::chrono::seconds(2)});
        CHECK_THROWS_AS(client.classify_one({"a."}, "r"), TransportError);
        CHECK_THROWS_AS(client.health(), TransportError);
        const ClassifierHandle handle = client;
        auto emails = synthetic_labeled_emails(20, 0.1, 1);
        CHECK_THROWS_AS(predict_sentences(handle, emails), TransportError);
    }
}

TEST_CASE("concurrent replies are reassembled in input order") {
    // Later requests answer first; each label encodes its sentence.
    testing::StubService stub([](const json& req) {
        const auto id = req.at("request_id").get<std::string>();
        const int k = std::stoi(id.substr(id.find('-') + 1));
        std::this_thread::sleep_for(std::chrono::milliseconds(std::max(0, 40 - 4 * k)));
        auto r = testing::StubService::all_negative(req);
        for (std::size_t i = 0; i < r["labels"].size(); ++i)
            r["labels"][i] = req["sentences"][i].get<std::string>() == "yes";
        return r;
    });
    ExternalClassifier client({stub.endpoint(), 4, std::chrono::seconds(10)});
    std::vector<std::vector<std::string>> batches;
    for (int b = 0; b < 10; ++b) {
        std::vector<std::string> s;
        for (int i = 0; i <= b; ++i) s.push_back((i + b) % 3 == 0 ? "yes" : "no");
        batches.push_back(s);
    }
    const auto replies = client.classify_many(batches);
    REQUIRE(replies.size() == batches.size());
    for (std::size_t b = 0; b < batches.size(); ++b) {
        REQUIRE(replies[b].labels.size() == batches[b].size());
        for (std::size_t i = 0; i < batches[b].size(); ++i) CHECK(replies[b].labels[i] == (batches[b][i] == "yes"));
    }

    ServiceTokenizer tok(client);
    std::vector<std::string> texts;
    for (int i = 0; i < 150; ++i) texts.push_back(std::string(static_cast<std::size_t>(i % 5 + 1), 'w'));
    const auto counts = tok.count_many(texts);
    REQUIRE(counts.size() == 150);
    CHECK(std::all_of(counts.begin(), counts.end(), [](int c) { return c == 1; }));
    CHECK(tok.count("three little words") == 3);
}

TEST_CASE("gold annotations round trip and apply") {
    GoldAnnotations gold{{"m1", {{0, true}, {1, false}}}, {"m2", {{0, false}}}};
    testing::TempDir dir;
    write_gold_jsonl(dir / "g.jsonl", gold);
    CHECK(read_gold_jsonl(dir / "g.jsonl") == gold);

    std::vector<Email> emails(3);
    emails[0].message_id = "m1";
    emails[0].sentences = ingest::split_sentences("You must vote. Thanks.", "m1");
    emails[1].message_id = "m2";
    emails[1].sentences = ingest::split_sentences("One. Two.", "m2");
    emails[2].message_id = "m3";
    emails[2].sentences = ingest::split_sentences("Nothing.", "m3");
    CHECK(apply_gold(emails, gold) == 1);
    CHECK(emails[0].sentences[0].gold_label == true);
    CHECK(emails[1].sentences[0].gold_label == false);
    CHECK_FALSE(emails[1].sentences[1].gold_label.has_value());
    CHECK_FALSE(emails[2].sentences[0].gold_label.has_value());

    std::map<std::string, std::vector<bool>> preds{{"m1", {true, false}}, {"m2", {false, true}}};
    write_predictions_jsonl(dir / "p.jsonl", emails, preds);
    const auto content = testing::slurp(dir / "p.jsonl");
    const auto lines = text::split_lines(content);
    CHECK(json::parse(lines[0]).at("label") == 1);
    CHECK(json::parse(lines[0]).at("predicted") == 1);
    CHECK_FALSE(json::parse(lines[3]).contains("label"));
}

TEST_CASE("thread split keeps threads together") {
    const auto emails = synthetic_labeled_emails(400, 0.05, 2);
    const auto roots = ingest::thread_roots(emails);
    const auto split = split_by_thread(emails, 0.125, 42);
    CHECK(split.train.size() + split.test.size() == emails.size());
    std::set<std::string> train_roots, test_roots;
    for (auto i : split.train) train_roots.insert(roots[i]);
    for (auto i : split.test) test_roots.insert(roots[i]);
    for (const auto& r : test_roots) CHECK(train_roots.count(r) == 0);
    const std::size_t threads = train_roots.size() + test_roots.size();
    CHECK(test_roots.size() == static_cast<std::size_t>(std::llround(0.125 * static_cast<double>(threads))));
    const auto again = split_by_thread(emails, 0.125, 42);
    CHECK(again.test == split.test);
    CHECK(split_by_thread(emails, 0.125, 43).test != split.test);
}

TEST_CASE("IS counts follow the sender's role in each month") {
    ingest::IdentityMap ids;
    ids.add_role("p", {"m@apache.org", ingest::Role::Mentor, std::nullopt});
    ids.add_role("p", {"f@x.org", ingest::Role::Contributor, std::nullopt});
    ids.add_role("p", {"f@x.org", ingest::Role::Committer, CivilDate{2020, 3, 1}});
    ingest::ProjectManifest m;
    m.project_id = "p";
    m.incubation_start = {2020, 1, 15};
    m.incubation_end = {2021, 1, 1};
    std::map<std::string, ingest::ProjectManifest> manifests{{"p", m}};

    auto mk = [](std::string id, std::string sender, CivilDate day) {
        Email e;
        e.message_id = std::move(id);
        e.project_id = "p";
        e.sender = std::move(sender);
        e.sent_at = make_timestamp(day, 12);
        return e;
    };
    std::vector<Email> emails{mk("a", "m@apache.org", {2020, 3, 5}), mk("b", "f@x.org", {2020, 2, 20}),
                              mk("c", "f@x.org", {2020, 3, 2}), mk("d", "m@apache.org", {2020, 3, 9}),
                              mk("e", "f@x.org", {2019, 12, 31})};
    SentencePredictions preds{{"a", {true, true, true}},
                              {"b", {true, false}},
                              {"c", {true, true}},
                              {"d", {false, false}},
                              {"e", {true}}};
    const auto counts = count_is_by_role(emails, preds, ids, manifests);
    CHECK(counts.at({"p", 2}).mentor == 3);
    CHECK(counts.at({"p", 1}).contributor == 1);
    CHECK(counts.at({"p", 1}).committer == 0);
    CHECK(counts.at({"p", 2}).committer == 2);
    CHECK(counts.at({"p", 2}).contributor == 0);
    CHECK(counts.count({"p", -1}) == 0);
    double total = 0;
    for (const auto& [k, v] : counts) total += v.mentor + v.committer + v.contributor;
    CHECK(total == 6);
}
