#include "govmine/institutional/role_counts.hpp"

namespace govmine::institutional {

std::map<stnet::ProjectMonth, stnet::RoleCounts> count_is_by_role(
    std::span<const ingest::Email> emails, const SentencePredictions& predictions,
    const ingest::IdentityMap& identities, const std::map<std::string, ingest::ProjectManifest>& manifests) {
    std::map<stnet::ProjectMonth, stnet::RoleCounts> out;
    for (const auto& e : emails) {
        if (e.is_bot) continue;
        auto m = manifests.find(e.project_id);
        if (m == manifests.end()) continue;
        const int month = month_index(e.sent_at, m->second.start_time());
        if (month < 0) continue;
        auto p = predictions.find(e.message_id);
        if (p == predictions.end()) continue;
        double n = 0;
        for (bool b : p->second) n += b ? 1.0 : 0.0;
        if (n == 0) continue;
        auto& counts = out[{e.project_id, month}];
        switch (identities.role_at(e.project_id, e.sender, e.sent_at)) {
            case ingest::Role::Mentor: counts.mentor += n; break;
            case ingest::Role::Committer: counts.committer += n; break;
            case ingest::Role::Contributor: counts.contributor += n; break;
        }
    }
    return out;
}

}  // namespace govmine::institutional
