#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace govmine::ingest::mime {

struct Header {
    std::string name;   // as written
    std::string value;  // unfolded
};

/// Splits a raw RFC 5322 message into unfolded headers and the raw body.
std::pair<std::vector<Header>, std::string> split_message(std::string_view raw);

/// First header with the given (case-insensitive) name, or empty.
std::string_view find_header(const std::vector<Header>& headers, std::string_view name);

std::string decode_base64(std::string_view in);
std::string decode_quoted_printable(std::string_view in);

/// Decodes RFC 2047 encoded-words ("=?utf-8?Q?...?=") to UTF-8.
std::string decode_encoded_words(std::string_view in);

/// Converts ISO-8859-1 / Windows-1252-ish bytes to UTF-8; UTF-8 input passes through.
std::string to_utf8(std::string_view bytes, std::string_view charset);

/// Rough HTML-to-text: drops tags, script/style blocks, decodes common entities,
/// and turns block-level tags into line breaks.
std::string html_to_text(std::string_view html);

/// Extracts the readable text of a message: prefers text/plain parts of
/// multipart bodies, falls back to HTML reduced to text, skips attachments.
std::string extract_text_body(const std::vector<Header>& headers, std::string_view raw_body);

/// Parameter of a structured header value, e.g. boundary from Content-Type.
std::string header_param(std::string_view value, std::string_view param);

}  // namespace govmine::ingest::mime
