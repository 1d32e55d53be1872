#include "govmine/stnet/networks.hpp"

#include "govmine/core/error.hpp"

namespace govmine::stnet {

bool SocialNet::add_edge(const NodeId& src, const NodeId& dst, int weight) {
    if (src == dst) return false;
    if (weight < 1) throw PreconditionError("social edge weight must be >= 1");
    nodes_.insert(src);
    nodes_.insert(dst);
    edges_[{src, dst}] += weight;
    return true;
}

void TechNet::add_edge(const NodeId& dev, const std::string& file, int weight) {
    if (weight < 1) throw PreconditionError("technical edge weight must be >= 1");
    devs_.insert(dev);
    files_.insert(file);
    edges_[{dev, file}] += weight;
}

std::map<std::string, std::string> sender_index(std::span<const ingest::Email> emails) {
    std::map<std::string, std::string> idx;
    for (const auto& e : emails) idx.emplace(e.message_id, e.sender);
    return idx;
}

SocialNet build_social_net(std::span<const ingest::Email> month_emails, int month_index,
                           const std::map<std::string, std::string>& parent_sender) {
    SocialNet net(month_emails.empty() ? std::string() : month_emails.front().project_id, month_index);
    for (const auto& e : month_emails) {
        if (e.is_bot) continue;
        net.add_node(e.sender);
    }
    for (const auto& e : month_emails) {
        if (e.is_bot) continue;
        if (e.parent_id) {
            if (auto it = parent_sender.find(*e.parent_id); it != parent_sender.end()) {
                // The parent's author may have posted in an earlier month; they
                // join this month's graph through the reply.
                net.add_edge(it->second, e.sender);
            }
        }
        for (const auto& r : e.recipients) {
            if (net.nodes().count(r) && r != e.sender) net.add_edge(e.sender, r);
        }
    }
    return net;
}

SocialNet build_social_net(std::span<const ingest::Email> month_emails, int month_index) {
    return build_social_net(month_emails, month_index, sender_index(month_emails));
}

TechNet build_tech_net(std::span<const ingest::Commit> month_commits, int month_index) {
    TechNet net(month_commits.empty() ? std::string() : month_commits.front().project_id, month_index);
    for (const auto& c : month_commits) {
        if (c.is_bot) continue;
        for (const auto& f : c.files) net.add_edge(c.author, f);
    }
    return net;
}

}  // namespace govmine::stnet
