#include "govmine/ingest/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <spdlog/spdlog.h>

#include "govmine/core/error.hpp"
#include "govmine/core/text.hpp"
#include "govmine/ingest/commits.hpp"
#include "govmine/ingest/mbox.hpp"
#include "govmine/ingest/sentences.hpp"
#include "govmine/ingest/threads.hpp"

namespace govmine::ingest {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<ProjectManifest> load_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("missing manifest file " + path.string());
    std::vector<ProjectManifest> out;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty() || line[0] == '#') continue;
        auto f = text::parse_csv_line(line);
        if (lineno == 1 && text::iequals(text::trim(f[0]), "project_id")) continue;
        auto where = path.string() + ":" + std::to_string(lineno);
        if (f.size() < 4) throw IngestError(where + ": expected project_id,outcome,incubation_start,incubation_end");
        ProjectManifest m;
        m.project_id = std::string(text::trim(f[0]));
        m.outcome = parse_outcome(f[1]);
        auto start = parse_iso_date(f[2]);
        auto end = parse_iso_date(f[3]);
        if (!start || !end) throw IngestError(where + ": bad incubation dates");
        if (!(*start < *end)) throw IngestError(where + ": incubation_start must precede incubation_end");
        m.incubation_start = *start;
        m.incubation_end = *end;
        if (!seen.insert(m.project_id).second) throw IngestError(where + ": duplicate project " + m.project_id);
        out.push_back(std::move(m));
    }
    return out;
}

IngestCounts& IngestCounts::operator+=(const IngestCounts& o) {
    emails_seen += o.emails_seen;
    emails_retained += o.emails_retained;
    emails_bot += o.emails_bot;
    emails_skipped += o.emails_skipped;
    emails_out_of_window += o.emails_out_of_window;
    emails_duplicate_id += o.emails_duplicate_id;
    commits_seen += o.commits_seen;
    commits_retained += o.commits_retained;
    commits_bot += o.commits_bot;
    commits_skipped += o.commits_skipped;
    commits_out_of_window += o.commits_out_of_window;
    files_dropped += o.files_dropped;
    unparseable_from += o.unparseable_from;
    synthetic_ids += o.synthetic_ids;
    return *this;
}

json IngestCounts::to_json() const {
    const auto parsed_emails = emails_seen - emails_skipped;
    const auto parsed_commits = commits_seen - commits_skipped;
    return json{
        {"emails_seen", emails_seen},
        {"emails_retained", emails_retained},
        {"emails_bot_filtered", emails_bot},
        {"emails_skipped", emails_skipped},
        {"emails_out_of_window", emails_out_of_window},
        {"emails_duplicate_id", emails_duplicate_id},
        {"email_bot_ratio", parsed_emails ? static_cast<double>(emails_bot) / static_cast<double>(parsed_emails) : 0.0},
        {"commits_seen", commits_seen},
        {"commits_retained", commits_retained},
        {"commits_bot_filtered", commits_bot},
        {"commits_skipped", commits_skipped},
        {"commits_out_of_window", commits_out_of_window},
        {"commit_bot_ratio",
         parsed_commits ? static_cast<double>(commits_bot) / static_cast<double>(parsed_commits) : 0.0},
        {"files_dropped", files_dropped},
        {"unparseable_from", unparseable_from},
        {"synthetic_message_ids", synthetic_ids},
    };
}

bool within_window(Timestamp t, const ProjectManifest& m, int margin_months) {
    const auto lo = make_timestamp(add_months(m.incubation_start, -margin_months));
    const auto hi = make_timestamp(add_months(m.incubation_end, margin_months)) + std::chrono::days{1};
    return t >= lo && t < hi;
}

namespace {

std::vector<fs::path> sorted_entries(const fs::path& dir, bool directories) {
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (directories ? entry.is_directory() : entry.is_regular_file()) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

ProjectCorpus ingest_project(const fs::path& corpus_root, const ProjectManifest& manifest,
                             const IngestSettings& settings) {
    ProjectCorpus corpus;
    corpus.manifest = manifest;
    auto& counts = corpus.counts;
    const fs::path project_dir = corpus_root / manifest.project_id;
    if (!fs::is_directory(project_dir)) throw IngestError("project directory missing: " + project_dir.string());

    std::vector<Email> emails;
    for (const auto& list_dir : sorted_entries(project_dir, true)) {
        MboxOptions opts;
        opts.identities = &settings.identities;
        opts.bot_rules = &settings.bot_rules;
        opts.list_name = list_dir.filename().string();
        for (const auto& file : sorted_entries(list_dir, false)) {
            if (file.extension() != ".mbox") continue;
            MboxStats stats;
            auto parsed = parse_mbox(file, manifest.project_id, opts, stats);
            counts.emails_seen += stats.messages_seen;
            counts.emails_skipped += stats.skipped_malformed;
            counts.unparseable_from += stats.unparseable_from;
            counts.synthetic_ids += stats.synthetic_ids;
            for (auto& e : parsed) {
                if (e.is_bot) {
                    ++counts.emails_bot;
                } else if (!within_window(e.sent_at, manifest, settings.window_margin_months)) {
                    ++counts.emails_out_of_window;
                } else {
                    emails.push_back(std::move(e));
                }
            }
        }
    }
    std::sort(emails.begin(), emails.end(), [](const Email& a, const Email& b) {
        return std::tie(a.sent_at, a.message_id, a.list_name) < std::tie(b.sent_at, b.message_id, b.list_name);
    });
    std::set<std::string> ids;
    for (auto& e : emails) {
        // Cross-posted messages appear once per list; keep the first copy.
        if (!ids.insert(e.message_id).second) {
            ++counts.emails_duplicate_id;
            continue;
        }
        corpus.emails.push_back(std::move(e));
    }
    link_threads(corpus.emails, std::chrono::days{settings.thread_subject_days});
    counts.emails_retained = corpus.emails.size();

    const fs::path commit_log = project_dir / "commits.jsonl";
    if (fs::exists(commit_log)) {
        CommitLogOptions opts{&settings.identities, &settings.bot_rules, &settings.source_filter};
        CommitLogStats stats;
        auto commits = parse_commits(commit_log, manifest.project_id, opts, stats);
        counts.commits_seen += stats.lines_seen;
        counts.commits_skipped += stats.skipped_malformed;
        counts.files_dropped += stats.files_dropped;
        std::set<std::string> commit_ids;
        for (auto& c : commits) {
            if (c.is_bot) {
                ++counts.commits_bot;
            } else if (!within_window(c.authored_at, manifest, settings.window_margin_months)) {
                ++counts.commits_out_of_window;
            } else if (commit_ids.insert(c.commit_id).second) {
                corpus.commits.push_back(std::move(c));
            }
        }
        std::sort(corpus.commits.begin(), corpus.commits.end(), [](const Commit& a, const Commit& b) {
            return std::tie(a.authored_at, a.commit_id) < std::tie(b.authored_at, b.commit_id);
        });
    }
    counts.commits_retained = corpus.commits.size();
    spdlog::info("{}: {} emails retained ({} bot, {} out of window), {} commits retained", manifest.project_id,
                 counts.emails_retained, counts.emails_bot, counts.emails_out_of_window, counts.commits_retained);
    return corpus;
}

json email_to_json(const Email& e) {
    json j{
        {"message_id", e.message_id},
        {"project_id", e.project_id},
        {"list", e.list_name},
        {"sent_at", format_iso8601(e.sent_at)},
        {"sender", e.sender},
        {"sender_raw", e.sender_raw},
        {"recipients", e.recipients},
        {"in_reply_to", e.in_reply_to ? json(*e.in_reply_to) : json(nullptr)},
        {"references", e.references},
        {"parent_id", e.parent_id ? json(*e.parent_id) : json(nullptr)},
        {"subject", e.subject},
        {"body", e.body},
        {"is_bot", e.is_bot},
    };
    return j;
}

Email email_from_json(const json& j) {
    Email e;
    e.message_id = j.at("message_id").get<std::string>();
    e.project_id = j.at("project_id").get<std::string>();
    e.list_name = j.value("list", std::string());
    auto ts = parse_iso8601(j.at("sent_at").get<std::string>());
    if (!ts) throw IngestError("bad sent_at in email " + e.message_id);
    e.sent_at = *ts;
    e.sender = j.at("sender").get<std::string>();
    e.sender_raw = j.value("sender_raw", std::string());
    e.recipients = j.value("recipients", std::vector<std::string>{});
    if (j.contains("in_reply_to") && !j["in_reply_to"].is_null()) e.in_reply_to = j["in_reply_to"].get<std::string>();
    e.references = j.value("references", std::vector<std::string>{});
    if (j.contains("parent_id") && !j["parent_id"].is_null()) e.parent_id = j["parent_id"].get<std::string>();
    e.subject = j.value("subject", std::string());
    e.body = j.value("body", std::string());
    e.is_bot = j.value("is_bot", false);
    e.sentences = split_sentences(e.body, e.message_id);
    return e;
}

json commit_to_json(const Commit& c) {
    return json{{"id", c.commit_id},         {"project_id", c.project_id}, {"authored_at", format_iso8601(c.authored_at)},
                {"author", c.author},        {"author_raw", c.author_raw}, {"files", c.files},
                {"is_bot", c.is_bot}};
}

Commit commit_from_json(const json& j) {
    Commit c;
    c.commit_id = j.at("id").get<std::string>();
    c.project_id = j.at("project_id").get<std::string>();
    auto ts = parse_iso8601(j.at("authored_at").get<std::string>());
    if (!ts) throw IngestError("bad authored_at in commit " + c.commit_id);
    c.authored_at = *ts;
    c.author = j.at("author").get<std::string>();
    c.author_raw = j.value("author_raw", std::string());
    c.files = j.value("files", std::vector<std::string>{});
    c.is_bot = j.value("is_bot", false);
    return c;
}

namespace {

template <typename T, typename Fn>
void write_jsonl(const fs::path& path, const std::vector<T>& items, Fn&& to_json) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write " + path.string());
    for (const auto& item : items) out << to_json(item).dump() << '\n';
}

template <typename T, typename Fn>
std::vector<T> read_jsonl(const fs::path& path, Fn&& from_json) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot read " + path.string());
    std::vector<T> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw IngestError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

void write_emails_jsonl(const fs::path& path, const std::vector<Email>& emails) {
    write_jsonl(path, emails, email_to_json);
}

void write_commits_jsonl(const fs::path& path, const std::vector<Commit>& commits) {
    write_jsonl(path, commits, commit_to_json);
}

std::vector<Email> read_emails_jsonl(const fs::path& path) { return read_jsonl<Email>(path, email_from_json); }

std::vector<Commit> read_commits_jsonl(const fs::path& path) { return read_jsonl<Commit>(path, commit_from_json); }

}  // namespace govmine::ingest
