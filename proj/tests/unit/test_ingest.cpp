#include <doctest.h>

#include <set>
#include <sstream>
#include <tuple>

#include "govmine/core/error.hpp"
#include "govmine/core/random.hpp"
#include "govmine/core/text.hpp"
#include "govmine/ingest/bots.hpp"
#include "govmine/ingest/commits.hpp"
#include "govmine/ingest/corpus.hpp"
#include "govmine/ingest/identity.hpp"
#include "govmine/ingest/mbox.hpp"
#include "govmine/ingest/mime.hpp"
#include "govmine/ingest/sentences.hpp"
#include "govmine/ingest/source_filter.hpp"
#include "govmine/ingest/threads.hpp"
#include "test_util.hpp"

using namespace govmine;
using namespace govmine::ingest;

namespace {

std::string message(std::string_view id, std::string_view from, std::string_view date, std::string_view subject,
                    std::string_view body, std::string_view extra_headers = {}) {
    std::string m = "From " + std::string(from) + " Mon Jan  1 00:00:00 2018\n";
    if (!id.empty()) m += "Message-ID: <" + std::string(id) + ">\n";
    m += "From: " + std::string(from) + "\nDate: " + std::string(date) + "\nSubject: " + std::string(subject) + "\n";
    m += extra_headers;
    m += "\n" + std::string(body) + "\n\n";
    return m;
}

std::vector<Email> parse_text(const std::string& mbox, std::string_view project = "p") {
    testing::TempDir dir;
    testing::spit(dir / "x.mbox", mbox);
    return parse_mbox(dir / "x.mbox", project);
}

struct HandBlock {
    std::string body;
    std::vector<std::string> sentences;
};

std::vector<HandBlock> hand_segmented() {
    const auto content = testing::slurp(testing::data_dir() / "sentences_hand.txt");
    std::vector<HandBlock> blocks;
    bool in_body = false;
    for (auto line : text::split_lines(content)) {
        if (line == "#### body") {
            blocks.emplace_back();
            in_body = true;
            continue;
        }
        if (line == "#### sentences") {
            in_body = false;
            continue;
        }
        if (in_body) blocks.back().body += std::string(line) + "\n";
        else if (!line.empty()) blocks.back().sentences.emplace_back(line);
    }
    return blocks;
}

ProjectManifest manifest_2018() {
    ProjectManifest m;
    m.project_id = "p";
    m.incubation_start = {2018, 3, 10};
    m.incubation_end = {2018, 9, 20};
    return m;
}

}  // namespace

TEST_CASE("bot detection examples") {
    CHECK(detect_bot("buildbot@apache.org", "", ""));
    CHECK_FALSE(detect_bot("alice@example.org", "release plan", ""));
    CHECK(detect_bot("dev@example.org", "[GitBox] PR opened", ""));
    CHECK(detect_bot("Jenkins Server <jenkins@builds.apache.org>", "Build failed in Jenkins: x #12", ""));
    CHECK(detect_bot("jira@apache.org", "[jira] Created: (X-1)", ""));
    CHECK_FALSE(detect_bot("Jenna Kinsley <jenna@example.org>", "Re: CI plans", ""));
}

TEST_CASE("bot rule files") {
    auto rules = BotRules::parse("# comment\n\nrobot\nsubject:^\\[auto\\]\nbody:do not reply\n");
    REQUIRE(rules.rules().size() == 3);
    CHECK(rules.matches("Robot <robot@x.org>", "", ""));
    CHECK(rules.matches("a@x.org", "[AUTO] report", ""));
    CHECK(rules.matches("a@x.org", "", "Please DO NOT REPLY to this"));
    CHECK_FALSE(rules.matches("a@x.org", "auto", "reply"));
    CHECK_THROWS_AS(BotRules::parse("subject:(unclosed"), ConfigError);
}

TEST_CASE("adding a bot rule never increases retained messages") {
    const auto root = testing::fixtures_dir() / "three_projects";
    const auto manifests = load_manifest(root / "projects.csv");
    REQUIRE(manifests.size() == 3);
    IngestSettings base;
    const auto before = ingest_project(root, manifests[0], base);
    std::size_t previous = before.emails.size();
    for (const char* extra : {"subject:vote", "body:release", "sender:apache\\.org", ".*"}) {
        auto pos = std::string(extra).find(':');
        const std::string field = pos == std::string::npos ? "sender" : std::string(extra).substr(0, pos);
        const std::string pattern = pos == std::string::npos ? extra : std::string(extra).substr(pos + 1);
        base.bot_rules.add(field == "subject" ? BotRules::Field::Subject
                           : field == "body"  ? BotRules::Field::Body
                                              : BotRules::Field::Sender,
                           pattern);
        const auto after = ingest_project(root, manifests[0], base);
        CHECK(after.emails.size() <= previous);
        CHECK(after.counts.emails_bot >= before.counts.emails_bot);
        previous = after.emails.size();
    }
    CHECK(previous == 0);
}

TEST_CASE("source filter") {
    const auto f = SourceFilter::defaults();
    CHECK(f.size() > 100);
    CHECK(f.is_source("src/a.java"));
    CHECK(f.is_source("docs/README.md"));
    CHECK(f.is_source("pom.xml"));
    CHECK(f.is_source("Makefile"));
    CHECK_FALSE(f.is_source("site/logo.png"));
    CHECK_FALSE(f.is_source("lib/thing.jar"));
    CHECK(f.is_source("A.JAVA"));

    const auto custom = SourceFilter::parse("# c\n.foo\nBUILD\n");
    CHECK(custom.is_source("x/y.foo"));
    CHECK(custom.is_source("pkg/BUILD"));
    CHECK_FALSE(custom.is_source("x.java"));

    CHECK(strip_svn_branch("trunk/src/A.java") == "src/A.java");
    CHECK(strip_svn_branch("branches/1.x/src/A.java") == "src/A.java");
    CHECK(strip_svn_branch("tags/v1/pom.xml") == "pom.xml");
    CHECK(strip_svn_branch("proj/trunk/src/A.java") == "src/A.java");
    CHECK(strip_svn_branch("src/A.java") == "src/A.java");
}

TEST_CASE("commit export parsing") {
    std::istringstream in(
        R"({"id":"c1","author":"Alice","email":"alice@apache.org","date":"2018-04-01T10:00:00Z","files":["a.java","logo.png"]})"
        "\n"
        R"({"id":"c2","author":"Alice","email":"alice@apache.org","date":"2018-04-02T10:00:00Z","files":["logo.png"]})"
        "\n"
        "this is not json\n"
        R"({"id":"c3","author":"Bob","email":"bob@x.org","date":"garbage","files":[]})"
        "\n\n");
    CommitLogStats stats;
    const auto commits = parse_commits(in, "p", {}, stats);
    REQUIRE(commits.size() == 2);
    CHECK(commits[0].files == std::vector<std::string>{"a.java"});
    CHECK(commits[1].files.empty());
    CHECK(commits[0].author == "alice@apache.org");
    CHECK(commits[0].project_id == "p");
    CHECK(stats.skipped_malformed == 2);
    CHECK(stats.files_dropped == 2);

    std::istringstream empty("");
    CommitLogStats s2;
    CHECK(parse_commits(empty, "p", {}, s2).empty());
}

TEST_CASE("git log conversion") {
    std::istringstream log(
        "commit 0123abcd (HEAD -> main)\n"
        "Author: Alice Example <alice@apache.org>\n"
        "Date:   2021-02-03T04:05:06+01:00\n"
        "\n"
        "    Fix the build\n"
        "\n"
        "src/A.java\n"
        "docs/logo.png\n"
        "\n"
        "commit 4567ef\n"
        "Merge: 1 2\n"
        "Author: Bob <bob@x.org>\n"
        "Date:   2021-02-04T00:00:00Z\n"
        "\n"
        "    Merge branch\n");
    std::ostringstream out;
    CHECK(convert_gitlog(log, out) == 2);
    std::istringstream back(out.str());
    CommitLogStats stats;
    SourceFilter everything = SourceFilter::parse(".java\n.png\n");
    CommitLogOptions opts;
    opts.source_filter = &everything;
    const auto commits = parse_commits(back, "p", opts, stats);
    REQUIRE(commits.size() == 2);
    CHECK(commits[0].commit_id == "0123abcd");
    CHECK(commits[0].author == "alice@apache.org");
    CHECK(commits[0].authored_at == make_timestamp({2021, 2, 3}, 3, 5, 6));
    CHECK(commits[0].files == std::vector<std::string>{"docs/logo.png", "src/A.java"});
    CHECK(commits[1].files.empty());
    CHECK(stats.skipped_malformed == 0);
}

TEST_CASE("sentence splitter examples") {
    CHECK(split_sentences("Please vote. The vote is open for 72 hours.").size() == 2);
    CHECK(split_sentences("").empty());
    CHECK(split_sentences("  \n\n ").empty());
    const auto s = split_sentences("See e.g. the guide. Thanks.", "m1");
    REQUIRE(s.size() == 2);
    CHECK(s[0].text == "See e.g. the guide.");
    CHECK(s[1].text == "Thanks.");
    CHECK(s[1].email_id == "m1");
    CHECK(s[1].index == 1);
}

TEST_CASE("sentence splitter agrees with the hand-segmented fixture") {
    const auto blocks = hand_segmented();
    std::size_t total = 0, agreed = 0;
    for (const auto& b : blocks) {
        const auto got = split_sentences(b.body);
        std::vector<std::string> texts;
        for (const auto& s : got) texts.push_back(s.text);
        CHECK_MESSAGE(texts == b.sentences, b.body);
        total += b.sentences.size();
        if (texts == b.sentences) agreed += b.sentences.size();
    }
    CHECK(total == 50);
    CHECK(agreed == total);
}

TEST_CASE("sentence spans tile the body") {
    rnd::Engine rng(7);
    const std::vector<std::string> pieces{"Hello", "world.", "e.g.", "Mr.", "Smith", "ok?", "yes!", "\n",
                                          "\n\n",  "  ",     "3.5",  "J.",  "etc.",  "x",   "\"quoted.\""};
    for (int trial = 0; trial < 500; ++trial) {
        std::string body;
        const auto n = rnd::between(rng, 0, 30);
        for (int i = 0; i < n; ++i) body += pieces[rnd::index(rng, pieces.size())] + " ";
        const auto s = split_sentences(body);
        if (s.empty()) {
            CHECK(text::trim(body).empty());
            continue;
        }
        CHECK(s.front().begin == 0);
        CHECK(s.back().end == body.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(s[i].index == i);
            CHECK(s[i].begin < s[i].end);
            CHECK_FALSE(s[i].text.empty());
            if (i > 0) CHECK(s[i].begin == s[i - 1].end);
        }
    }
}

TEST_CASE("identity resolution") {
    IdentityMap map;
    map.add_role("p", {"alice@apache.org", Role::Committer, std::nullopt});
    map.add_role("p", {"fay@example.org", Role::Contributor, std::nullopt});
    map.add_role("p", {"fay@example.org", Role::Committer, CivilDate{2018, 6, 1}});

    auto r = resolve_identity("Alice <ALICE@Apache.Org>", map, "p");
    CHECK(r.key == "alice@apache.org");
    CHECK(r.role == Role::Committer);
    CHECK(r.parsed);

    map.add_alias("a@x.org", "alice@apache.org");
    CHECK(resolve_identity("a@x.org", map, "p").key == "alice@apache.org");
    CHECK(resolve_identity("A <A@X.ORG>", map, "p").role == Role::Committer);
    CHECK_NOTHROW(map.add_alias("a@x.org", "alice@apache.org"));
    CHECK_THROWS_AS(map.add_alias("a@x.org", "bob@apache.org"), IngestError);

    CHECK(resolve_identity("stranger@nowhere.org", map, "p").role == Role::Contributor);
    CHECK(resolve_identity("alice@apache.org", map, "other").role == Role::Contributor);

    CHECK(map.role_at("p", "fay@example.org", make_timestamp({2018, 5, 31})) == Role::Contributor);
    CHECK(map.role_at("p", "fay@example.org", make_timestamp({2018, 6, 1})) == Role::Committer);

    const auto bad = resolve_identity("<<<>>>", map, "p");
    CHECK(bad.key == kUnknownIdentity);
    CHECK(bad.role == Role::Contributor);
    CHECK_FALSE(bad.parsed);

    CHECK(parse_mailbox("bob at apache.org").address == "bob@apache.org");
    CHECK(parse_mailbox("bob@x.org (Bob B)").address == "bob@x.org");
    CHECK(parse_mailbox("\"Doe, Jane\" <JD@X.org>").display_name == "Doe, Jane");
    CHECK(parse_address_list("a@x.org, \"B, C\" <b@y.org>").size() == 2);
}

TEST_CASE("roster and alias csv loading") {
    const auto root = testing::fixtures_dir() / "three_projects";
    const auto map = IdentityMap::load(root / "roster.csv", root / "aliases.csv");
    CHECK(map.canonical("ivo@users.example.net") == "ivo.petrov@example.org");
    CHECK(map.role("alpha", "lin.zhou@apache.org") == Role::Mentor);
    CHECK(map.role("alpha", "fay.wong@example.org") == Role::Committer);
    CHECK(map.role_at("alpha", "fay.wong@example.org", make_timestamp({2017, 10, 31})) == Role::Contributor);
}

TEST_CASE("manifest validation") {
    testing::TempDir dir;
    testing::spit(dir / "ok.csv", "project_id,outcome,incubation_start,incubation_end\nx,retired,2018-01-01,2019-01-01\n");
    const auto m = load_manifest(dir / "ok.csv");
    REQUIRE(m.size() == 1);
    CHECK(m[0].outcome == Outcome::Retired);
    testing::spit(dir / "bad1.csv", "project_id,outcome,incubation_start,incubation_end\nx,graduated,2019-01-01,2018-01-01\n");
    CHECK_THROWS_AS(load_manifest(dir / "bad1.csv"), IngestError);
    testing::spit(dir / "bad2.csv", "project_id,outcome,incubation_start,incubation_end\nx,maybe,2018-01-01,2019-01-01\n");
    CHECK_THROWS_AS(load_manifest(dir / "bad2.csv"), IngestError);
    CHECK_THROWS_AS(load_manifest(dir / "missing.csv"), IngestError);
}

TEST_CASE("mbox parsing basics") {
    CHECK(parse_text("").empty());

    const auto mbox = message("a1@x", "Alice <alice@apache.org>", "Mon, 5 Mar 2018 10:00:00 +0000", "[DISCUSS] plan",
                              "First line.\n>From the archive, escaped.") +
                      message("b2@x", "bob@apache.org", "Mon, 5 Mar 2018 11:00:00 +0000", "Re: [DISCUSS] plan",
                              "On Mon, Mar 5, 2018, Alice <alice@apache.org> wrote:\n> First line.\n\nAgreed.",
                              "In-Reply-To: <a1@x>\nCc: carol@apache.org, Alice <alice@apache.org>\n");
    const auto emails = parse_text(mbox);
    REQUIRE(emails.size() == 2);
    CHECK(emails[0].message_id == "a1@x");
    CHECK(emails[0].sender == "alice@apache.org");
    CHECK(emails[0].body.find("From the archive") != std::string::npos);
    CHECK(emails[1].in_reply_to == "a1@x");
    CHECK(text::trim(emails[1].body) == "Agreed.");
    CHECK(emails[1].recipients.size() == 2);
    CHECK(emails[1].sent_at == make_timestamp({2018, 3, 5}, 11));
    CHECK_FALSE(emails[0].sentences.empty());
}

TEST_CASE("mbox split undoes mboxrd quoting") {
    const auto parts = split_mbox(
        "From a@x Mon Jan  1 00:00:00 2018\nX: 1\n\n>From here\n>>From deeper\n\n"
        "From b@x Tue Jan  2 00:00:00 2018\nX: 2\n\nbody\nFrom inside, not a separator\n");
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].find("\nFrom here") != std::string::npos);
    CHECK(parts[0].find("\n>From deeper") != std::string::npos);
    CHECK(parts[1].find("From inside") != std::string::npos);
}

TEST_CASE("missing message id gets a deterministic synthetic id") {
    const auto mbox = message("", "carol@apache.org", "Tue, 6 Mar 2018 09:00:00 +0000", "hello", "Body.");
    const auto a = parse_text(mbox);
    const auto b = parse_text(mbox);
    REQUIRE(a.size() == 1);
    CHECK(a[0].message_id == b[0].message_id);
    CHECK_FALSE(a[0].message_id.empty());
    CHECK(synthetic_message_id("x", make_timestamp({2018, 1, 1}), "s") ==
          synthetic_message_id("x", make_timestamp({2018, 1, 1}), "s"));
    CHECK(synthetic_message_id("x", make_timestamp({2018, 1, 1}), "s") !=
          synthetic_message_id("x", make_timestamp({2018, 1, 1}), "t"));
    CHECK(normalize_message_id("  <abc@def> ") == "abc@def");
}

TEST_CASE("messages without a usable date are skipped and counted") {
    const std::string mbox = "From x\nFrom: a@b.org\nSubject: s\n\nno date\n\n" +
                             message("ok@x", "a@b.org", "Tue, 6 Mar 2018 09:00:00 +0000", "s", "fine");
    testing::TempDir dir;
    testing::spit(dir / "x.mbox", mbox);
    MboxStats stats;
    const auto emails = parse_mbox(dir / "x.mbox", "p", {}, stats);
    CHECK(emails.size() == 1);
    CHECK(stats.messages_seen == 2);
    CHECK(stats.skipped_malformed == 1);
    CHECK_THROWS_AS(parse_mbox(dir / "nope.mbox", "p"), IngestError);
}

TEST_CASE("quote stripping") {
    CHECK(text::trim(strip_quoted_text("keep\n> drop\n>> drop\nkeep2")) == "keep\nkeep2");
    CHECK(strip_quoted_text("On Tue, Jan 5, 2010 at 1:00 PM, Alice <a@b.org>\nwrote:\n> x\nmine").find("wrote") ==
          std::string::npos);
    CHECK(strip_quoted_text("On Tue, Jan 5, 2010, Alice <a@b.org> wrote:\n> x\nmine").find("mine") !=
          std::string::npos);
    CHECK(text::trim(strip_quoted_text("Nothing quoted here.")) == "Nothing quoted here.");
}

TEST_CASE("mime decoding") {
    CHECK(mime::decode_base64("aGVsbG8gd29ybGQ=") == "hello world");
    CHECK(mime::decode_quoted_printable("caf=C3=A9 =3D soft=\nbreak") == "caf\xC3\xA9 = softbreak");
    CHECK(mime::decode_encoded_words("=?utf-8?Q?caf=C3=A9?= time") == "caf\xC3\xA9 time");
    CHECK(mime::decode_encoded_words("=?UTF-8?B?aGVsbG8=?=") == "hello");
    CHECK(mime::to_utf8("caf\xE9", "iso-8859-1") == "caf\xC3\xA9");
    const auto t = mime::html_to_text("<html><style>p{}</style><p>One &amp; two</p><p>Three&nbsp;&lt;4&gt;</p></html>");
    CHECK(t.find("One & two") != std::string::npos);
    CHECK(t.find("<4>") != std::string::npos);
    CHECK(t.find("p{}") == std::string::npos);
    CHECK(mime::header_param("multipart/alternative; boundary=\"xyz\"", "boundary") == "xyz");

    const std::string raw =
        "Content-Type: multipart/alternative; boundary=\"B\"\n\n"
        "--B\nContent-Type: text/plain; charset=utf-8\nContent-Transfer-Encoding: quoted-printable\n\n"
        "Plain =3D text\n"
        "--B\nContent-Type: text/html\n\n<p>html text</p>\n"
        "--B--\n";
    auto [headers, body] = mime::split_message(raw);
    CHECK(text::trim(mime::extract_text_body(headers, body)) == "Plain = text");

    const std::string html_only = "Content-Type: text/html\n\n<div>Only <b>html</b></div>\n";
    auto [h2, b2] = mime::split_message(html_only);
    CHECK(text::trim(mime::extract_text_body(h2, b2)) == "Only html");

    const std::string folded = "Subject: a\n  folded line\nX: y\n\nbody";
    auto [h3, b3] = mime::split_message(folded);
    CHECK(mime::find_header(h3, "subject") == "a folded line");
    CHECK(b3 == "body");
}

TEST_CASE("thread linking") {
    auto mk = [](std::string id, int hour, std::string subject, std::optional<std::string> irt = std::nullopt,
                 std::vector<std::string> refs = {}) {
        Email e;
        e.message_id = std::move(id);
        e.sent_at = make_timestamp({2018, 4, 1}, hour);
        e.subject = std::move(subject);
        e.in_reply_to = std::move(irt);
        e.references = std::move(refs);
        return e;
    };
    std::vector<Email> emails{mk("a", 1, "[VOTE] Release 1.0"), mk("b", 2, "Re: [VOTE] Release 1.0", "a"),
                              mk("c", 3, "RE: Re: [VOTE] Release 1.0", std::nullopt, {"a", "b"}),
                              mk("d", 4, "Re: [VOTE] Release 1.0"), mk("e", 5, "Unrelated"),
                              mk("f", 6, "Re: ghost", "missing-id")};
    link_threads(emails);
    CHECK_FALSE(emails[0].parent_id.has_value());
    CHECK(emails[1].parent_id == "a");
    CHECK(emails[2].parent_id == "b");
    CHECK(emails[3].parent_id == "c");
    CHECK_FALSE(emails[4].parent_id.has_value());
    CHECK_FALSE(emails[5].parent_id.has_value());
    const auto roots = thread_roots(emails);
    CHECK(roots == std::vector<std::string>{"a", "a", "a", "a", "e", "f"});

    CHECK(normalize_subject("Re: RE: [VOTE] x").first == "[VOTE] x");
    CHECK(normalize_subject("Re: RE: [VOTE] x").second);
    CHECK_FALSE(normalize_subject("[VOTE] x").second);

    std::vector<Email> late{mk("a", 1, "Topic"), mk("b", 2, "Re: Topic")};
    late[1].sent_at = late[0].sent_at + std::chrono::days{31};
    link_threads(late);
    CHECK_FALSE(late[1].parent_id.has_value());
}

TEST_CASE("window filter") {
    const auto m = manifest_2018();
    CHECK(within_window(make_timestamp({2018, 2, 10}), m, 1));
    CHECK_FALSE(within_window(make_timestamp({2018, 2, 9}, 23, 59, 59), m, 1));
    CHECK(within_window(make_timestamp({2018, 10, 20}, 23, 59, 59), m, 1));
    CHECK_FALSE(within_window(make_timestamp({2018, 10, 21}), m, 1));
    CHECK(within_window(make_timestamp({2018, 9, 20}, 23), m, 0));
    CHECK_FALSE(within_window(make_timestamp({2018, 3, 9}), m, 0));
}

TEST_CASE("ingested fixture projects respect the window and ordering") {
    const auto root = testing::fixtures_dir() / "three_projects";
    IngestSettings settings;
    settings.identities = IdentityMap::load(root / "roster.csv", root / "aliases.csv");
    for (const auto& m : load_manifest(root / "projects.csv")) {
        const auto c = ingest_project(root, m, settings);
        CHECK(c.counts.emails_retained == c.emails.size());
        CHECK(c.counts.emails_bot > 0);
        CHECK(c.counts.emails_out_of_window > 0);
        std::set<std::string> ids;
        for (std::size_t i = 0; i < c.emails.size(); ++i) {
            const auto& e = c.emails[i];
            CHECK(within_window(e.sent_at, m, settings.window_margin_months));
            CHECK_FALSE(e.is_bot);
            CHECK(ids.insert(e.message_id).second);
            if (i > 0)
                CHECK(std::tie(c.emails[i - 1].sent_at, c.emails[i - 1].message_id) <
                      std::tie(e.sent_at, e.message_id));
        }
        for (const auto& cm : c.commits) {
            CHECK(within_window(cm.authored_at, m, settings.window_margin_months));
            CHECK_FALSE(cm.is_bot);
            for (const auto& f : cm.files) CHECK(settings.source_filter.is_source(f));
        }
        if (m.project_id == "alpha") {
            bool alias_merged = false, alias_raw = false;
            for (const auto& e : c.emails) {
                alias_raw |= e.sender_raw.find("ivo@users.example.net") != std::string::npos;
                alias_merged |= e.sender == "ivo.petrov@example.org";
                CHECK(e.sender != "ivo@users.example.net");
            }
            CHECK(alias_raw);
            CHECK(alias_merged);
        }
    }
}

TEST_CASE("ingest is deterministic and jsonl round-trips") {
    const auto root = testing::fixtures_dir() / "three_projects";
    const auto m = load_manifest(root / "projects.csv")[1];
    IngestSettings settings;
    const auto a = ingest_project(root, m, settings);
    const auto b = ingest_project(root, m, settings);
    testing::TempDir dir;
    write_emails_jsonl(dir / "a.jsonl", a.emails);
    write_emails_jsonl(dir / "b.jsonl", b.emails);
    write_commits_jsonl(dir / "ca.jsonl", a.commits);
    write_commits_jsonl(dir / "cb.jsonl", b.commits);
    CHECK(testing::slurp(dir / "a.jsonl") == testing::slurp(dir / "b.jsonl"));
    CHECK(testing::slurp(dir / "ca.jsonl") == testing::slurp(dir / "cb.jsonl"));

    const auto back = read_emails_jsonl(dir / "a.jsonl");
    REQUIRE(back.size() == a.emails.size());
    write_emails_jsonl(dir / "c.jsonl", back);
    CHECK(testing::slurp(dir / "c.jsonl") == testing::slurp(dir / "a.jsonl"));
    const auto cback = read_commits_jsonl(dir / "ca.jsonl");
    write_commits_jsonl(dir / "cc.jsonl", cback);
    CHECK(testing::slurp(dir / "cc.jsonl") == testing::slurp(dir / "ca.jsonl"));
}
