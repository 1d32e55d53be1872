#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "govmine/ingest/bots.hpp"
#include "govmine/ingest/identity.hpp"
#include "govmine/ingest/records.hpp"
#include "govmine/ingest/source_filter.hpp"

namespace govmine::ingest {

/// Manifest CSV: project_id,outcome,incubation_start,incubation_end
std::vector<ProjectManifest> load_manifest(const std::filesystem::path& path);

struct IngestCounts {
    std::size_t emails_seen = 0;
    std::size_t emails_retained = 0;
    std::size_t emails_bot = 0;
    std::size_t emails_skipped = 0;
    std::size_t emails_out_of_window = 0;
    std::size_t emails_duplicate_id = 0;
    std::size_t commits_seen = 0;
    std::size_t commits_retained = 0;
    std::size_t commits_bot = 0;
    std::size_t commits_skipped = 0;
    std::size_t commits_out_of_window = 0;
    std::size_t files_dropped = 0;
    std::size_t unparseable_from = 0;
    std::size_t synthetic_ids = 0;

    IngestCounts& operator+=(const IngestCounts& o);
    nlohmann::json to_json() const;
};

struct ProjectCorpus {
    ProjectManifest manifest;
    std::vector<Email> emails;    // retained, sorted by (sent_at, message_id)
    std::vector<Commit> commits;  // retained, sorted by (authored_at, commit_id)
    IngestCounts counts;
};

struct IngestSettings {
    BotRules bot_rules = BotRules::defaults();
    SourceFilter source_filter = SourceFilter::defaults();
    IdentityMap identities;
    int window_margin_months = 1;
    int thread_subject_days = 30;
};

/// True when `t` lies in [start - margin months, end + margin months] (end inclusive to day end).
bool within_window(Timestamp t, const ProjectManifest& m, int margin_months);

/// Ingests one project from `<root>/<project>/<list>/<YYYYMM>.mbox` and
/// `<root>/<project>/commits.jsonl`. All lists are merged; bot and
/// out-of-window records are dropped and counted; threads are linked.
ProjectCorpus ingest_project(const std::filesystem::path& corpus_root, const ProjectManifest& manifest,
                             const IngestSettings& settings);

nlohmann::json email_to_json(const Email& e);
Email email_from_json(const nlohmann::json& j);
nlohmann::json commit_to_json(const Commit& c);
Commit commit_from_json(const nlohmann::json& j);

void write_emails_jsonl(const std::filesystem::path& path, const std::vector<Email>& emails);
void write_commits_jsonl(const std::filesystem::path& path, const std::vector<Commit>& commits);
std::vector<Email> read_emails_jsonl(const std::filesystem::path& path);
std::vector<Commit> read_commits_jsonl(const std::filesystem::path& path);

}  // namespace govmine::ingest
