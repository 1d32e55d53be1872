#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "govmine/ingest/identity.hpp"
#include "govmine/ingest/records.hpp"
#include "govmine/stnet/panel.hpp"

namespace govmine::institutional {

/// Sentence-level predictions keyed by email id.
using SentencePredictions = std::map<std::string, std::vector<bool>>;

/// Sums IS sentences per (project, month, sender role). The role is the
/// sender's role at the email's send time. Emails before month 0 are ignored.
std::map<stnet::ProjectMonth, stnet::RoleCounts> count_is_by_role(
    std::span<const ingest::Email> emails, const SentencePredictions& predictions,
    const ingest::IdentityMap& identities, const std::map<std::string, ingest::ProjectManifest>& manifests);

}  // namespace govmine::institutional
