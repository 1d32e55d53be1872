#include "govmine/ingest/mbox.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include <spdlog/spdlog.h>

#include "govmine/core/digest.hpp"
#include "govmine/core/error.hpp"
#include "govmine/core/text.hpp"
#include "govmine/ingest/mime.hpp"
#include "govmine/ingest/sentences.hpp"

namespace govmine::ingest {

std::vector<std::string> split_mbox(std::string_view content) {
    std::vector<std::string> messages;
    std::string current;
    bool in_message = false;
    bool prev_blank = true;
    std::size_t pos = 0;
    while (pos < content.size()) {
        auto nl = content.find('\n', pos);
        const bool has_nl = nl != std::string_view::npos;
        if (!has_nl) nl = content.size();
        std::string_view line = content.substr(pos, nl - pos);
        pos = nl + 1;
        std::string_view bare = line;
        if (!bare.empty() && bare.back() == '\r') bare.remove_suffix(1);

        if (prev_blank && bare.rfind("From ", 0) == 0) {
            if (in_message) messages.push_back(std::move(current));
            current.clear();
            in_message = true;
            prev_blank = false;
            continue;
        }
        prev_blank = bare.empty();
        if (!in_message) continue;  // preamble before the first separator
        // mboxrd: ">From " and ">>From " lose one quoting level.
        std::size_t q = 0;
        while (q < bare.size() && bare[q] == '>') ++q;
        if (q > 0 && bare.substr(q).rfind("From ", 0) == 0) line.remove_prefix(1);
        current.append(line);
        current.push_back('\n');
    }
    if (in_message) messages.push_back(std::move(current));
    return messages;
}

namespace {

bool is_quoted(std::string_view line) {
    auto t = text::trim(line);
    return !t.empty() && t.front() == '>';
}

bool ends_with_wrote(std::string_view line) {
    static const std::regex wrote(R"((wrote|writes|schrieb|a écrit)\s*:\s*$)", std::regex::icase);
    auto t = text::trim(line);
    return std::regex_search(t.begin(), t.end(), wrote);
}

bool starts_with_on(std::string_view line) {
    auto t = text::trim(line);
    return text::starts_with_icase(t, "On ") || text::starts_with_icase(t, "Am ") || text::starts_with_icase(t, "Le ");
}

}  // namespace

std::string strip_quoted_text(std::string_view body) {
    auto lines = text::split_lines(body);
    std::vector<bool> drop(lines.size(), false);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (is_quoted(lines[i])) {
            drop[i] = true;
            continue;
        }
        if (ends_with_wrote(lines[i])) {
            drop[i] = true;
            // Attribution wrapped over two lines: "On <date>, Name\n<addr> wrote:".
            if (i > 0 && !drop[i - 1] && starts_with_on(lines[i - 1]) && !text::trim(lines[i - 1]).empty())
                drop[i - 1] = true;
        }
    }
    std::string out;
    out.reserve(body.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (drop[i]) continue;
        out.append(lines[i]);
        out.push_back('\n');
    }
    // Trim trailing blank lines left behind by removed quotes.
    while (!out.empty() && (out.back() == '\n' || out.back() == ' ' || out.back() == '\t')) out.pop_back();
    if (!out.empty()) out.push_back('\n');
    return out;
}

std::string normalize_message_id(std::string_view raw) {
    auto v = text::trim(raw);
    auto lt = v.find('<');
    if (lt != std::string_view::npos) {
        auto gt = v.find('>', lt);
        v = v.substr(lt + 1, gt == std::string_view::npos ? std::string_view::npos : gt - lt - 1);
    }
    return std::string(text::trim(v));
}

namespace {

std::vector<std::string> message_id_list(std::string_view raw) {
    std::vector<std::string> ids;
    std::size_t pos = 0;
    while (true) {
        auto lt = raw.find('<', pos);
        if (lt == std::string_view::npos) break;
        auto gt = raw.find('>', lt);
        if (gt == std::string_view::npos) break;
        auto id = text::trim(raw.substr(lt + 1, gt - lt - 1));
        if (!id.empty()) ids.emplace_back(id);
        pos = gt + 1;
    }
    if (ids.empty()) {
        auto t = text::trim(raw);
        if (!t.empty() && t.find(' ') == std::string_view::npos) ids.emplace_back(t);
    }
    return ids;
}

}  // namespace

std::string synthetic_message_id(std::string_view sender, Timestamp sent_at, std::string_view subject) {
    std::string key;
    key.append(sender).push_back('\x1f');
    key.append(format_iso8601(sent_at)).push_back('\x1f');
    key.append(subject);
    return "synthetic-" + sha256_hex(key).substr(0, 32) + "@govmine.invalid";
}

std::optional<Email> parse_message(std::string_view raw, std::string_view project_id, const MboxOptions& options,
                                   MboxStats& stats) {
    auto [headers, raw_body] = mime::split_message(raw);
    if (headers.empty()) return std::nullopt;
    auto date = parse_rfc2822_date(mime::find_header(headers, "Date"));
    if (!date) return std::nullopt;

    Email e;
    e.project_id = std::string(project_id);
    e.list_name = options.list_name;
    e.sent_at = *date;
    e.sender_raw = mime::decode_encoded_words(mime::find_header(headers, "From"));
    auto from = parse_mailbox(e.sender_raw);
    if (from.address.empty()) {
        e.sender = std::string(kUnknownIdentity);
        ++stats.unparseable_from;
    } else {
        e.sender = options.identities ? options.identities->canonical(from.address) : from.address;
    }
    e.subject = std::string(text::trim(mime::decode_encoded_words(mime::find_header(headers, "Subject"))));

    auto ids = message_id_list(mime::find_header(headers, "Message-ID"));
    if (ids.empty()) {
        e.message_id = synthetic_message_id(e.sender, e.sent_at, e.subject);
        ++stats.synthetic_ids;
    } else {
        e.message_id = ids.front();
    }
    if (auto irt = message_id_list(mime::find_header(headers, "In-Reply-To")); !irt.empty())
        e.in_reply_to = irt.front();
    e.references = message_id_list(mime::find_header(headers, "References"));

    for (auto name : {"To", "Cc"}) {
        for (auto& addr : parse_address_list(mime::decode_encoded_words(mime::find_header(headers, name)))) {
            auto key = options.identities ? options.identities->canonical(addr.address) : addr.address;
            if (key != e.sender) e.recipients.push_back(std::move(key));
        }
    }
    std::sort(e.recipients.begin(), e.recipients.end());
    e.recipients.erase(std::unique(e.recipients.begin(), e.recipients.end()), e.recipients.end());

    e.body = strip_quoted_text(mime::extract_text_body(headers, raw_body));
    const BotRules& rules = options.bot_rules ? *options.bot_rules : BotRules::defaults();
    e.is_bot = detect_bot(e.sender_raw, e.subject, e.body, rules);
    e.sentences = split_sentences(e.body, e.message_id);
    return e;
}

std::vector<Email> parse_mbox(const std::filesystem::path& path, std::string_view project_id,
                              const MboxOptions& options, MboxStats& stats) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot read mbox " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IngestError("read error on " + path.string());
    const std::string content = ss.str();

    std::vector<Email> out;
    for (const auto& raw : split_mbox(content)) {
        ++stats.messages_seen;
        auto email = parse_message(raw, project_id, options, stats);
        if (!email) {
            ++stats.skipped_malformed;
            spdlog::warn("{}: skipped message #{} without a parseable Date header", path.string(), stats.messages_seen);
            continue;
        }
        out.push_back(std::move(*email));
    }
    return out;
}

std::vector<Email> parse_mbox(const std::filesystem::path& path, std::string_view project_id) {
    MboxStats stats;
    return parse_mbox(path, project_id, MboxOptions{}, stats);
}

}  // namespace govmine::ingest
