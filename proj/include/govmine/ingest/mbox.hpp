#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "govmine/ingest/bots.hpp"
#include "govmine/ingest/identity.hpp"
#include "govmine/ingest/records.hpp"

namespace govmine::ingest {

struct MboxStats {
    std::size_t messages_seen = 0;
    std::size_t skipped_malformed = 0;
    std::size_t unparseable_from = 0;
    std::size_t synthetic_ids = 0;
};

struct MboxOptions {
    const IdentityMap* identities = nullptr;  // optional alias merge
    const BotRules* bot_rules = nullptr;      // defaults when null
    std::string list_name;
};

/// Splits mbox text into raw messages on "From " separator lines and undoes
/// mboxrd ">From " quoting.
std::vector<std::string> split_mbox(std::string_view content);

/// Removes quoted reply lines (leading '>') and attribution lines such as
/// "On Tue, Jan 5, 2010, Alice <a@b> wrote:" (possibly wrapped over two lines).
std::string strip_quoted_text(std::string_view body);

/// Parses one raw message. Returns nullopt when the message lacks a usable
/// Date header.
std::optional<Email> parse_message(std::string_view raw, std::string_view project_id, const MboxOptions& options,
                                   MboxStats& stats);

/// Parses every message in an mbox file. Throws IngestError if the file cannot
/// be read; individual malformed messages are skipped and counted.
std::vector<Email> parse_mbox(const std::filesystem::path& path, std::string_view project_id,
                              const MboxOptions& options, MboxStats& stats);
std::vector<Email> parse_mbox(const std::filesystem::path& path, std::string_view project_id);

/// Deterministic id for messages without Message-ID.
std::string synthetic_message_id(std::string_view sender, Timestamp sent_at, std::string_view subject);

/// Normalizes a message id token: trims whitespace and angle brackets.
std::string normalize_message_id(std::string_view raw);

}  // namespace govmine::ingest
