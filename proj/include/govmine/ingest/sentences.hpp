#pragma once

#include <string_view>
#include <vector>

#include "govmine/ingest/records.hpp"

namespace govmine::ingest {

/// Rule-based sentence splitter.
///
/// Splits after runs of '.', '!' or '?' (plus closing quotes/brackets) that are
/// followed by whitespace, unless the period ends a known abbreviation, an
/// initial, or a decimal/ordinal. Blank lines and lines opening with a list
/// marker ("1. ", "- ") also end a sentence. The
/// returned spans tile the body: whitespace between sentences belongs to the
/// preceding sentence, leading whitespace to the first. Token counts are left
/// at zero.
std::vector<SentenceRecord> split_sentences(std::string_view body, std::string_view email_id = {});

}  // namespace govmine::ingest
