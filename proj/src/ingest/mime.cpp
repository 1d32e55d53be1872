#include "govmine/ingest/mime.hpp"

#include <array>
#include <cctype>
#include <cstdint>

#include "govmine/core/text.hpp"

namespace govmine::ingest::mime {

std::pair<std::vector<Header>, std::string> split_message(std::string_view raw) {
    std::vector<Header> headers;
    std::size_t pos = 0;
    while (pos < raw.size()) {
        auto nl = raw.find('\n', pos);
        if (nl == std::string_view::npos) nl = raw.size();
        std::string_view line = raw.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = nl + 1;
        if (line.empty()) return {std::move(headers), std::string(raw.substr(std::min(pos, raw.size())))};
        if ((line[0] == ' ' || line[0] == '\t') && !headers.empty()) {
            headers.back().value += ' ';
            headers.back().value += text::trim(line);
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string_view::npos || colon == 0) continue;  // garbage header line
        headers.push_back(Header{std::string(text::trim(line.substr(0, colon))),
                                 std::string(text::trim(line.substr(colon + 1)))});
    }
    return {std::move(headers), std::string()};
}

std::string_view find_header(const std::vector<Header>& headers, std::string_view name) {
    for (const auto& h : headers)
        if (text::iequals(h.name, name)) return h.value;
    return {};
}

std::string decode_base64(std::string_view in) {
    static const auto table = [] {
        std::array<int, 256> t{};
        t.fill(-1);
        constexpr std::string_view alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
        for (std::size_t i = 0; i < alphabet.size(); ++i) t[static_cast<unsigned char>(alphabet[i])] = static_cast<int>(i);
        t['-'] = 62;
        t['_'] = 63;
        return t;
    }();
    std::string out;
    std::uint32_t acc = 0;
    int bits = 0;
    for (char ch : in) {
        if (ch == '=') break;
        int v = table[static_cast<unsigned char>(ch)];
        if (v < 0) continue;
        acc = (acc << 6) | static_cast<std::uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<char>((acc >> bits) & 0xFF));
        }
    }
    return out;
}

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

}  // namespace

std::string decode_quoted_printable(std::string_view in) {
    std::string out;
    out.reserve(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        char c = in[i];
        if (c != '=') {
            out.push_back(c);
            continue;
        }
        // Soft line break.
        if (i + 1 < in.size() && (in[i + 1] == '\n' || in[i + 1] == '\r')) {
            ++i;
            if (in[i] == '\r' && i + 1 < in.size() && in[i + 1] == '\n') ++i;
            continue;
        }
        if (i + 2 < in.size()) {
            int hi = hex_value(in[i + 1]);
            int lo = hex_value(in[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
                continue;
            }
        }
        out.push_back(c);
    }
    return out;
}

std::string to_utf8(std::string_view bytes, std::string_view charset) {
    const std::string cs = text::to_lower(text::trim(charset));
    const bool latin = cs == "iso-8859-1" || cs == "latin1" || cs == "iso-8859-15" || cs == "windows-1252" ||
                       cs == "cp1252" || cs == "us-ascii";
    if (!latin) return std::string(bytes);
    std::string out;
    out.reserve(bytes.size());
    for (unsigned char c : bytes) {
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back(static_cast<char>(0xC0 | (c >> 6)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        }
    }
    return out;
}

std::string decode_encoded_words(std::string_view in) {
    std::string out;
    std::size_t pos = 0;
    bool last_was_word = false;
    while (pos < in.size()) {
        auto start = in.find("=?", pos);
        if (start == std::string_view::npos) {
            out += in.substr(pos);
            break;
        }
        auto q1 = in.find('?', start + 2);
        auto q2 = q1 == std::string_view::npos ? q1 : in.find('?', q1 + 1);
        auto end = q2 == std::string_view::npos ? q2 : in.find("?=", q2 + 1);
        if (end == std::string_view::npos) {
            out += in.substr(pos);
            break;
        }
        auto between = in.substr(pos, start - pos);
        // Whitespace between adjacent encoded words is dropped.
        if (!(last_was_word && text::trim(between).empty())) out += between;
        auto charset = in.substr(start + 2, q1 - start - 2);
        auto encoding = in.substr(q1 + 1, q2 - q1 - 1);
        auto payload = in.substr(q2 + 1, end - q2 - 1);
        std::string decoded;
        if (text::iequals(encoding, "B")) {
            decoded = decode_base64(payload);
        } else {
            std::string qp(payload);
            for (auto& c : qp)
                if (c == '_') c = ' ';
            decoded = decode_quoted_printable(qp);
        }
        out += to_utf8(decoded, charset);
        pos = end + 2;
        last_was_word = true;
    }
    return out;
}

std::string header_param(std::string_view value, std::string_view param) {
    std::size_t pos = 0;
    while (pos < value.size()) {
        auto semi = value.find(';', pos);
        if (semi == std::string_view::npos) return {};
        auto next = value.find(';', semi + 1);
        auto part = text::trim(value.substr(semi + 1, next == std::string_view::npos ? next : next - semi - 1));
        auto eq = part.find('=');
        if (eq != std::string_view::npos && text::iequals(text::trim(part.substr(0, eq)), param)) {
            auto v = text::trim(part.substr(eq + 1));
            if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
            return std::string(v);
        }
        pos = semi + 1;
    }
    return {};
}

namespace {

std::string decode_entity(std::string_view name) {
    if (name == "amp") return "&";
    if (name == "lt") return "<";
    if (name == "gt") return ">";
    if (name == "quot") return "\"";
    if (name == "apos" || name == "#39") return "'";
    if (name == "nbsp") return " ";
    if (!name.empty() && name[0] == '#') {
        unsigned long cp = 0;
        try {
            cp = name.size() > 1 && (name[1] == 'x' || name[1] == 'X')
                     ? std::stoul(std::string(name.substr(2)), nullptr, 16)
                     : std::stoul(std::string(name.substr(1)));
        } catch (...) {
            return {};
        }
        std::string out;
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
        return out;
    }
    return {};
}

bool is_block_tag(std::string_view tag) {
    static constexpr std::array<std::string_view, 12> blocks{"p",  "br", "div", "li", "tr", "h1",
                                                             "h2", "h3", "h4",  "ul", "ol", "blockquote"};
    for (auto b : blocks)
        if (text::iequals(tag, b)) return true;
    return false;
}

}  // namespace

std::string html_to_text(std::string_view html) {
    std::string out;
    std::size_t i = 0;
    while (i < html.size()) {
        char c = html[i];
        if (c == '<') {
            auto close = html.find('>', i);
            if (close == std::string_view::npos) break;
            auto tag = html.substr(i + 1, close - i - 1);
            bool closing = !tag.empty() && tag[0] == '/';
            if (closing) tag.remove_prefix(1);
            std::size_t n = 0;
            while (n < tag.size() && std::isalnum(static_cast<unsigned char>(tag[n]))) ++n;
            auto name = tag.substr(0, n);
            if (!closing && (text::iequals(name, "script") || text::iequals(name, "style"))) {
                const std::string end_tag = "</" + text::to_lower(name);
                std::string lower = text::to_lower(html.substr(close));
                auto end = lower.find(end_tag);
                if (end == std::string::npos) break;
                auto end_close = html.find('>', close + end);
                i = end_close == std::string_view::npos ? html.size() : end_close + 1;
                continue;
            }
            if (is_block_tag(name)) out += "\n";
            i = close + 1;
        } else if (c == '&') {
            auto semi = html.find(';', i);
            if (semi != std::string_view::npos && semi - i <= 8) {
                auto decoded = decode_entity(html.substr(i + 1, semi - i - 1));
                if (!decoded.empty()) {
                    out += decoded;
                    i = semi + 1;
                    continue;
                }
            }
            out.push_back(c);
            ++i;
        } else {
            out.push_back(c);
            ++i;
        }
    }
    // Collapse runs of spaces within lines; keep line structure.
    std::string collapsed;
    collapsed.reserve(out.size());
    for (auto line : text::split_lines(out)) {
        std::string l;
        bool space = false;
        for (char ch : line) {
            if (ch == ' ' || ch == '\t') {
                space = true;
                continue;
            }
            if (space && !l.empty()) l.push_back(' ');
            space = false;
            l.push_back(ch);
        }
        collapsed += l;
        collapsed += '\n';
    }
    return collapsed;
}

namespace {

std::string decode_transfer(std::string_view body, std::string_view encoding) {
    auto enc = text::to_lower(text::trim(encoding));
    if (enc == "base64") return decode_base64(body);
    if (enc == "quoted-printable") return decode_quoted_printable(body);
    return std::string(body);
}

std::string media_type(std::string_view content_type) {
    auto semi = content_type.find(';');
    return text::to_lower(text::trim(content_type.substr(0, semi)));
}

struct Extracted {
    std::string plain;
    std::string html;
};

void collect_parts(const std::vector<Header>& headers, std::string_view body, Extracted& acc, int depth) {
    auto ctype = find_header(headers, "Content-Type");
    auto type = ctype.empty() ? std::string("text/plain") : media_type(ctype);
    auto disposition = text::to_lower(find_header(headers, "Content-Disposition"));
    if (disposition.rfind("attachment", 0) == 0) return;

    if (type.rfind("multipart/", 0) == 0 && depth < 8) {
        auto boundary = header_param(ctype, "boundary");
        if (boundary.empty()) return;
        const std::string delim = "--" + boundary;
        std::size_t pos = body.find(delim);
        while (pos != std::string_view::npos) {
            std::size_t part_start = body.find('\n', pos);
            if (part_start == std::string_view::npos) break;
            if (body.substr(pos + delim.size(), 2) == "--") break;
            ++part_start;
            std::size_t next = body.find(delim, part_start);
            auto part = body.substr(part_start, next == std::string_view::npos ? std::string_view::npos
                                                                             : next - part_start);
            auto [ph, pb] = split_message(part);
            collect_parts(ph, pb, acc, depth + 1);
            pos = next;
        }
        return;
    }
    auto charset = header_param(ctype, "charset");
    auto decoded = to_utf8(decode_transfer(body, find_header(headers, "Content-Transfer-Encoding")), charset);
    if (type == "text/plain") {
        if (!acc.plain.empty()) acc.plain += "\n";
        acc.plain += decoded;
    } else if (type == "text/html") {
        if (!acc.html.empty()) acc.html += "\n";
        acc.html += html_to_text(decoded);
    }
}

}  // namespace

std::string extract_text_body(const std::vector<Header>& headers, std::string_view raw_body) {
    Extracted acc;
    collect_parts(headers, raw_body, acc, 0);
    std::string out = acc.plain.empty() ? acc.html : acc.plain;
    // Normalize line endings.
    std::string norm;
    norm.reserve(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] == '\r') {
            if (i + 1 < out.size() && out[i + 1] == '\n') continue;
            norm.push_back('\n');
        } else {
            norm.push_back(out[i]);
        }
    }
    return norm;
}

}  // namespace govmine::ingest::mime
