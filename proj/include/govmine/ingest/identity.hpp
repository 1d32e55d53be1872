#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "govmine/core/time.hpp"
#include "govmine/ingest/records.hpp"

namespace govmine::ingest {

inline constexpr std::string_view kUnknownIdentity = "unknown";

struct ParsedAddress {
    std::string display_name;
    std::string address;  // lowercased, may be empty when unparseable
};

/// Parses an RFC 5322 mailbox ("Name <a@b>", "a@b (Name)", "a at b").
ParsedAddress parse_mailbox(std::string_view raw);

/// Splits an address-list header (To/Cc) into mailboxes.
std::vector<ParsedAddress> parse_address_list(std::string_view raw);

/// Alias merging and per-project role lookup.
class IdentityMap {
public:
    /// Adds alias -> canonical. Re-adding an alias with a different target throws.
    void add_alias(std::string_view alias, std::string_view canonical);
    void add_role(std::string_view project_id, RosterEntry entry);

    /// Canonical key of a normalized address (identity if no alias).
    std::string canonical(std::string_view address) const;

    /// Role of `key` in `project_id` at time `at`; Contributor when unknown.
    Role role_at(std::string_view project_id, std::string_view key, Timestamp at) const;
    /// Role ignoring time (latest roster row).
    Role role(std::string_view project_id, std::string_view key) const;

    const std::map<std::string, std::string, std::less<>>& aliases() const { return aliases_; }

    static IdentityMap load(const std::filesystem::path& roster_csv, const std::filesystem::path& alias_csv);
    void load_roster_csv(const std::filesystem::path& path);
    void load_alias_csv(const std::filesystem::path& path);

private:
    std::map<std::string, std::string, std::less<>> aliases_;
    // (project, key) -> rows sorted by `since` (nullopt first).
    std::map<std::pair<std::string, std::string>, std::vector<RosterEntry>> roles_;
};

struct ResolvedIdentity {
    std::string key;
    Role role = Role::Contributor;
    bool parsed = true;
};

/// Resolves a From value to (canonical key, role). Unparseable values yield
/// key "unknown" with parsed = false.
ResolvedIdentity resolve_identity(std::string_view raw_from, const IdentityMap& map, std::string_view project_id,
                                  std::optional<Timestamp> at = std::nullopt);

}  // namespace govmine::ingest
