#include "govmine/ingest/identity.hpp"

#include <algorithm>
#include <fstream>

#include "govmine/core/error.hpp"
#include "govmine/core/text.hpp"
#include "govmine/ingest/mime.hpp"

namespace govmine::ingest {

namespace {

std::string deobfuscate(std::string s) {
    // Apache archives render addresses as "alice at apache dot org".
    auto replace_word = [&](std::string_view word, std::string_view with) {
        std::string lower = text::to_lower(s);
        std::string needle = " " + std::string(word) + " ";
        std::size_t pos;
        while ((pos = lower.find(needle)) != std::string::npos) {
            s.replace(pos, needle.size(), with);
            lower.replace(pos, needle.size(), with);
        }
    };
    replace_word("at", "@");
    replace_word("dot", ".");
    return s;
}

bool valid_address(std::string_view a) {
    auto at = a.find('@');
    if (at == std::string_view::npos || at == 0 || at + 1 >= a.size()) return false;
    if (a.find('@', at + 1) != std::string_view::npos) return false;
    return std::none_of(a.begin(), a.end(), [](char c) { return c == ' ' || c == '\t' || c == '<' || c == '>'; });
}

std::string unquote(std::string_view s) {
    s = text::trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return std::string(text::trim(s));
}

}  // namespace

ParsedAddress parse_mailbox(std::string_view raw) {
    std::string decoded = mime::decode_encoded_words(text::trim(raw));
    std::string_view v = decoded;
    ParsedAddress out;
    std::string candidate;
    auto lt = v.rfind('<');
    auto gt = v.rfind('>');
    if (lt != std::string_view::npos && gt != std::string_view::npos && gt > lt) {
        candidate = std::string(text::trim(v.substr(lt + 1, gt - lt - 1)));
        out.display_name = unquote(v.substr(0, lt));
    } else if (auto lp = v.find('('); lp != std::string_view::npos) {
        candidate = std::string(text::trim(v.substr(0, lp)));
        auto rp = v.find(')', lp);
        out.display_name = unquote(v.substr(lp + 1, rp == std::string_view::npos ? rp : rp - lp - 1));
    } else {
        candidate = std::string(v);
    }
    candidate = text::to_lower(text::trim(deobfuscate(candidate)));
    if (!candidate.empty() && candidate.rfind("mailto:", 0) == 0) candidate = candidate.substr(7);
    if (valid_address(candidate)) out.address = std::move(candidate);
    return out;
}

std::vector<ParsedAddress> parse_address_list(std::string_view raw) {
    std::vector<ParsedAddress> out;
    std::string cur;
    bool quoted = false;
    int angle = 0;
    auto flush = [&] {
        if (!text::trim(cur).empty()) {
            auto p = parse_mailbox(cur);
            if (!p.address.empty()) out.push_back(std::move(p));
        }
        cur.clear();
    };
    for (char c : raw) {
        if (c == '"') quoted = !quoted;
        if (!quoted && c == '<') ++angle;
        if (!quoted && c == '>' && angle > 0) --angle;
        if (c == ',' && !quoted && angle == 0) {
            flush();
            continue;
        }
        cur.push_back(c);
    }
    flush();
    return out;
}

void IdentityMap::add_alias(std::string_view alias, std::string_view canonical) {
    auto a = text::to_lower(text::trim(alias));
    auto c = text::to_lower(text::trim(canonical));
    if (a.empty() || c.empty()) throw IngestError("alias map: empty alias or canonical key");
    if (auto it = aliases_.find(a); it != aliases_.end()) {
        if (it->second != c)
            throw IngestError("alias '" + a + "' maps to both '" + it->second + "' and '" + c + "'");
        return;
    }
    aliases_.emplace(std::move(a), std::move(c));
}

void IdentityMap::add_role(std::string_view project_id, RosterEntry entry) {
    entry.identity_key = canonical(text::to_lower(text::trim(entry.identity_key)));
    auto& rows = roles_[{std::string(project_id), entry.identity_key}];
    rows.push_back(std::move(entry));
    std::stable_sort(rows.begin(), rows.end(), [](const RosterEntry& a, const RosterEntry& b) {
        if (!a.since) return b.since.has_value();
        if (!b.since) return false;
        return *a.since < *b.since;
    });
}

std::string IdentityMap::canonical(std::string_view address) const {
    // Follow chains but guard against cycles.
    std::string key(address);
    for (int hops = 0; hops < 16; ++hops) {
        auto it = aliases_.find(key);
        if (it == aliases_.end() || it->second == key) break;
        key = it->second;
    }
    return key;
}

Role IdentityMap::role_at(std::string_view project_id, std::string_view key, Timestamp at) const {
    auto it = roles_.find({std::string(project_id), std::string(key)});
    if (it == roles_.end()) return Role::Contributor;
    const auto day = to_civil(at);
    std::optional<Role> role;
    for (const auto& row : it->second)
        if (!row.since || *row.since <= day) role = row.role;
    return role.value_or(Role::Contributor);
}

Role IdentityMap::role(std::string_view project_id, std::string_view key) const {
    auto it = roles_.find({std::string(project_id), std::string(key)});
    if (it == roles_.end() || it->second.empty()) return Role::Contributor;
    return it->second.back().role;
}

namespace {

template <typename Fn>
void for_each_csv_row(const std::filesystem::path& path, std::string_view first_header, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot read " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty() || line[0] == '#') continue;
        auto fields = text::parse_csv_line(line);
        if (lineno == 1 && !fields.empty() && text::iequals(text::trim(fields[0]), first_header)) continue;
        fn(fields, lineno);
    }
}

}  // namespace

void IdentityMap::load_alias_csv(const std::filesystem::path& path) {
    for_each_csv_row(path, "alias", [&](const std::vector<std::string>& f, std::size_t lineno) {
        if (f.size() < 2) throw IngestError(path.string() + ":" + std::to_string(lineno) + ": expected alias,canonical");
        add_alias(f[0], f[1]);
    });
}

void IdentityMap::load_roster_csv(const std::filesystem::path& path) {
    for_each_csv_row(path, "project_id", [&](const std::vector<std::string>& f, std::size_t lineno) {
        if (f.size() < 3)
            throw IngestError(path.string() + ":" + std::to_string(lineno) + ": expected project_id,identity_key,role");
        RosterEntry e;
        e.identity_key = f[1];
        e.role = parse_role(f[2]);
        if (f.size() >= 4 && !text::trim(f[3]).empty()) {
            e.since = parse_iso_date(f[3]);
            if (!e.since) throw IngestError(path.string() + ":" + std::to_string(lineno) + ": bad date '" + f[3] + "'");
        }
        add_role(text::trim(f[0]), std::move(e));
    });
}

IdentityMap IdentityMap::load(const std::filesystem::path& roster_csv, const std::filesystem::path& alias_csv) {
    IdentityMap m;
    // Aliases first so roster keys are canonicalized.
    if (!alias_csv.empty() && std::filesystem::exists(alias_csv)) m.load_alias_csv(alias_csv);
    if (!roster_csv.empty()) m.load_roster_csv(roster_csv);
    return m;
}

ResolvedIdentity resolve_identity(std::string_view raw_from, const IdentityMap& map, std::string_view project_id,
                                  std::optional<Timestamp> at) {
    auto parsed = parse_mailbox(raw_from);
    if (parsed.address.empty()) return ResolvedIdentity{std::string(kUnknownIdentity), Role::Contributor, false};
    ResolvedIdentity r;
    r.key = map.canonical(parsed.address);
    r.role = at ? map.role_at(project_id, r.key, *at) : map.role(project_id, r.key);
    return r;
}

}  // namespace govmine::ingest
