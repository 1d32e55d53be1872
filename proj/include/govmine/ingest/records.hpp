#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "govmine/core/time.hpp"

namespace govmine::ingest {

enum class Outcome { Graduated, Retired };
enum class Role { Mentor, Committer, Contributor };

std::string_view to_string(Outcome o) noexcept;
std::string_view to_string(Role r) noexcept;
Outcome parse_outcome(std::string_view s);
Role parse_role(std::string_view s);

struct RosterEntry {
    std::string identity_key;
    Role role = Role::Contributor;
    /// Role is effective from this date on; absent means "always".
    std::optional<CivilDate> since;
};

struct ProjectManifest {
    std::string project_id;
    Outcome outcome = Outcome::Graduated;
    CivilDate incubation_start;
    CivilDate incubation_end;
    std::vector<RosterEntry> roster;

    Timestamp start_time() const { return make_timestamp(incubation_start); }
};

/// A sentence of an email body. `begin`/`end` are byte offsets into the body;
/// consecutive sentences tile the body.
struct SentenceRecord {
    std::string email_id;
    std::size_t index = 0;
    std::string text;
    std::size_t begin = 0;
    std::size_t end = 0;
    int token_count = 0;
    std::optional<bool> gold_label;
    std::optional<bool> predicted_label;
};

struct Email {
    std::string message_id;
    std::string project_id;
    std::string list_name;
    Timestamp sent_at{};
    std::string sender;       // canonical identity key
    std::string sender_raw;   // From header as received
    std::vector<std::string> recipients;  // canonical keys from To/Cc
    std::optional<std::string> in_reply_to;
    std::vector<std::string> references;
    /// Resolved thread parent (see link_threads); not a header.
    std::optional<std::string> parent_id;
    std::string subject;
    std::string body;  // quote-stripped text
    bool is_bot = false;
    std::vector<SentenceRecord> sentences;
};

struct Commit {
    std::string commit_id;
    std::string project_id;
    Timestamp authored_at{};
    std::string author;  // canonical identity key
    std::string author_raw;
    std::vector<std::string> files;
    bool is_bot = false;
};

}  // namespace govmine::ingest
