#include "govmine/ingest/threads.hpp"

#include <map>
#include <unordered_map>

#include "govmine/core/text.hpp"

namespace govmine::ingest {

std::pair<std::string, bool> normalize_subject(std::string_view subject) {
    auto s = text::trim(subject);
    bool reply = false;
    for (;;) {
        // "Re:", "RE:", "Re[2]:", "Aw:" (German mailers).
        std::size_t n = 0;
        if (text::starts_with_icase(s, "re")) n = 2;
        else if (text::starts_with_icase(s, "aw")) n = 2;
        if (n == 0) break;
        std::size_t i = n;
        if (i < s.size() && s[i] == '[') {
            auto close = s.find(']', i);
            if (close == std::string_view::npos) break;
            i = close + 1;
        }
        if (i >= s.size() || s[i] != ':') break;
        s = text::trim(s.substr(i + 1));
        reply = true;
    }
    // Collapse internal whitespace so wrapped subjects compare equal.
    std::string out;
    bool space = false;
    for (char c : s) {
        if (c == ' ' || c == '\t') {
            space = true;
            continue;
        }
        if (space && !out.empty()) out.push_back(' ');
        space = false;
        out.push_back(c);
    }
    return {out, reply};
}

void link_threads(std::vector<Email>& emails, std::chrono::seconds subject_window) {
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < emails.size(); ++i) by_id.emplace(emails[i].message_id, i);
    // normalized subject -> index of the most recent message seen so far
    std::map<std::string, std::size_t> last_by_subject;

    for (std::size_t i = 0; i < emails.size(); ++i) {
        auto& e = emails[i];
        e.parent_id.reset();
        auto resolves = [&](const std::string& id) {
            auto it = by_id.find(id);
            return it != by_id.end() && it->second != i;
        };
        if (e.in_reply_to && resolves(*e.in_reply_to)) {
            e.parent_id = *e.in_reply_to;
        } else if (!e.references.empty() && resolves(e.references.back())) {
            e.parent_id = e.references.back();
        }
        auto [subject, reply_marker] = normalize_subject(e.subject);
        const bool claims_reply = reply_marker || e.in_reply_to.has_value() || !e.references.empty();
        if (!e.parent_id && claims_reply && !subject.empty()) {
            if (auto it = last_by_subject.find(subject); it != last_by_subject.end()) {
                const auto& candidate = emails[it->second];
                if (e.sent_at - candidate.sent_at <= subject_window && candidate.sent_at <= e.sent_at)
                    e.parent_id = candidate.message_id;
            }
        }
        if (!subject.empty()) last_by_subject[subject] = i;
    }
}

std::vector<std::string> thread_roots(std::span<const Email> emails) {
    std::unordered_map<std::string, const Email*> by_id;
    for (const auto& e : emails) by_id.emplace(e.message_id, &e);
    std::vector<std::string> roots;
    roots.reserve(emails.size());
    for (const auto& e : emails) {
        const Email* cur = &e;
        for (std::size_t hops = 0; hops <= emails.size() && cur->parent_id; ++hops) {
            auto it = by_id.find(*cur->parent_id);
            if (it == by_id.end()) break;
            cur = it->second;
        }
        roots.push_back(cur->message_id);
    }
    return roots;
}

}  // namespace govmine::ingest
