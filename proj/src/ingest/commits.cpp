#include "govmine/ingest/commits.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "govmine/core/error.hpp"
#include "govmine/core/text.hpp"

namespace govmine::ingest {

using nlohmann::json;

std::vector<Commit> parse_commits(std::istream& in, std::string_view project_id, const CommitLogOptions& options,
                                  CommitLogStats& stats) {
    const BotRules& rules = options.bot_rules ? *options.bot_rules : BotRules::defaults();
    const SourceFilter& filter = options.source_filter ? *options.source_filter : SourceFilter::defaults();
    std::vector<Commit> out;
    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        ++stats.lines_seen;
        try {
            auto j = json::parse(line);
            Commit c;
            c.project_id = std::string(project_id);
            c.commit_id = j.at("id").get<std::string>();
            auto date = parse_iso8601(j.at("date").get<std::string>());
            if (!date) throw std::runtime_error("bad date");
            c.authored_at = *date;
            const std::string name = j.value("author", std::string());
            const std::string email = j.value("email", std::string());
            c.author_raw = name.empty() ? email : name + " <" + email + ">";
            auto addr = parse_mailbox(email.empty() ? name : email);
            if (addr.address.empty()) {
                c.author = std::string(kUnknownIdentity);
            } else {
                c.author = options.identities ? options.identities->canonical(addr.address) : addr.address;
            }
            c.is_bot = detect_bot(c.author_raw, j.value("message", std::string()), {}, rules);
            for (const auto& f : j.at("files")) {
                auto path = strip_svn_branch(f.get<std::string>());
                if (filter.is_source(path))
                    c.files.push_back(std::move(path));
                else
                    ++stats.files_dropped;
            }
            std::sort(c.files.begin(), c.files.end());
            c.files.erase(std::unique(c.files.begin(), c.files.end()), c.files.end());
            out.push_back(std::move(c));
        } catch (const std::exception& e) {
            ++stats.skipped_malformed;
            spdlog::warn("commit log line {} skipped: {}", stats.lines_seen, e.what());
        }
    }
    return out;
}

std::vector<Commit> parse_commits(const std::filesystem::path& path, std::string_view project_id,
                                  const CommitLogOptions& options, CommitLogStats& stats) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot read commit log " + path.string());
    return parse_commits(in, project_id, options, stats);
}

std::vector<Commit> parse_commits(const std::filesystem::path& path, std::string_view project_id) {
    CommitLogStats stats;
    return parse_commits(path, project_id, CommitLogOptions{}, stats);
}

std::size_t convert_gitlog(std::istream& in, std::ostream& out) {
    std::size_t written = 0;
    json current;
    std::string message;
    bool have = false;
    auto flush = [&] {
        if (!have) return;
        current["message"] = std::string(text::trim(message));
        out << current.dump() << '\n';
        ++written;
        have = false;
        message.clear();
    };
    std::string line;
    bool in_headers = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("commit ", 0) == 0) {
            flush();
            current = json::object();
            auto id = text::trim(std::string_view(line).substr(7));
            // "commit <sha> (HEAD -> main)" decorations.
            current["id"] = std::string(id.substr(0, id.find(' ')));
            current["author"] = "";
            current["email"] = "";
            current["date"] = "";
            current["files"] = json::array();
            have = true;
            in_headers = true;
            continue;
        }
        if (!have) continue;
        if (in_headers) {
            if (line.rfind("Author:", 0) == 0) {
                auto mb = parse_mailbox(text::trim(std::string_view(line).substr(7)));
                current["author"] = mb.display_name;
                current["email"] = mb.address;
                continue;
            }
            if (line.rfind("Date:", 0) == 0) {
                auto raw = text::trim(std::string_view(line).substr(5));
                auto ts = parse_iso8601(raw);
                current["date"] = ts ? format_iso8601(*ts) : std::string(raw);
                continue;
            }
            if (line.rfind("Merge:", 0) == 0 || line.find(':') != std::string::npos) continue;
            if (line.empty()) {
                in_headers = false;
                continue;
            }
        }
        if (line.rfind("    ", 0) == 0) {
            message += line.substr(4);
            message += '\n';
            continue;
        }
        auto t = text::trim(line);
        if (!t.empty()) current["files"].push_back(std::string(t));
    }
    flush();
    return written;
}

}  // namespace govmine::ingest
