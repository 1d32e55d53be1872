#pragma once

#include <chrono>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "govmine/ingest/records.hpp"

namespace govmine::ingest {

/// Strips any number of leading "Re:" markers (and list tags like "[VOTE]"
/// are kept). Returns the normalized subject and whether a reply marker was present.
std::pair<std::string, bool> normalize_subject(std::string_view subject);

/// Resolves `parent_id` for each email of one project: In-Reply-To first,
/// then the last References entry, then the most recent earlier message
/// with the same normalized subject within `subject_window` (only for
/// messages carrying a reply marker or unresolved reply headers).
/// Emails must be sorted by (sent_at, message_id).
void link_threads(std::vector<Email>& emails, std::chrono::seconds subject_window = std::chrono::days{30});

/// Root message id of each email's thread (follows parent links).
std::vector<std::string> thread_roots(std::span<const Email> emails);

}  // namespace govmine::ingest
