#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "govmine/ingest/bots.hpp"
#include "govmine/ingest/identity.hpp"
#include "govmine/ingest/records.hpp"
#include "govmine/ingest/source_filter.hpp"

namespace govmine::ingest {

struct CommitLogStats {
    std::size_t lines_seen = 0;
    std::size_t skipped_malformed = 0;
    std::size_t files_dropped = 0;
};

struct CommitLogOptions {
    const IdentityMap* identities = nullptr;
    const BotRules* bot_rules = nullptr;
    const SourceFilter* source_filter = nullptr;
};

/// Parses a JSON-lines commit export:
/// {"id", "author", "email", "date", "files": [...]}, optional "message".
std::vector<Commit> parse_commits(std::istream& in, std::string_view project_id, const CommitLogOptions& options,
                                  CommitLogStats& stats);
std::vector<Commit> parse_commits(const std::filesystem::path& path, std::string_view project_id,
                                  const CommitLogOptions& options, CommitLogStats& stats);
std::vector<Commit> parse_commits(const std::filesystem::path& path, std::string_view project_id);

/// Converts `git log --name-only --date=iso-strict` output to the JSON-lines
/// commit format. Returns the number of commits written.
std::size_t convert_gitlog(std::istream& in, std::ostream& out);

}  // namespace govmine::ingest
