#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>

#include "govmine/ingest/records.hpp"

namespace govmine::stnet {

using NodeId = std::string;

/// Directed, weighted developer communication graph for one project-month.
/// Invariants: no self-loops; every weight >= 1; edge endpoints are nodes.
class SocialNet {
public:
    SocialNet() = default;
    SocialNet(std::string project_id, int month_index) : project_id_(std::move(project_id)), month_(month_index) {}

    void add_node(const NodeId& n) { nodes_.insert(n); }
    /// Adds `weight` to edge (src -> dst); self-loops are ignored. Returns false if ignored.
    bool add_edge(const NodeId& src, const NodeId& dst, int weight = 1);

    const std::set<NodeId>& nodes() const { return nodes_; }
    const std::map<std::pair<NodeId, NodeId>, int>& edges() const { return edges_; }
    const std::string& project_id() const { return project_id_; }
    int month_index() const { return month_; }

private:
    std::string project_id_;
    int month_ = 0;
    std::set<NodeId> nodes_;
    std::map<std::pair<NodeId, NodeId>, int> edges_;
};

/// Weighted bipartite developer-file graph for one project-month.
class TechNet {
public:
    TechNet() = default;
    TechNet(std::string project_id, int month_index) : project_id_(std::move(project_id)), month_(month_index) {}

    void add_edge(const NodeId& dev, const std::string& file, int weight = 1);

    const std::set<NodeId>& dev_nodes() const { return devs_; }
    const std::set<std::string>& file_nodes() const { return files_; }
    const std::map<std::pair<NodeId, std::string>, int>& edges() const { return edges_; }
    const std::string& project_id() const { return project_id_; }
    int month_index() const { return month_; }

private:
    std::string project_id_;
    int month_ = 0;
    std::set<NodeId> devs_;
    std::set<std::string> files_;
    std::map<std::pair<NodeId, std::string>, int> edges_;
};

/// Builds the social network from the emails of one month.
///
/// Reply edges run from the parent's author to the replier. `thread_index`
/// resolves parent ids (which may point into earlier months); emails whose
/// parent is unknown add no reply edge. Direct-address edges run from the
/// sender to each To/Cc recipient that is itself a sender that month.
/// Every sender is a node, including isolates.
SocialNet build_social_net(std::span<const ingest::Email> month_emails, int month_index,
                           const std::map<std::string, std::string>& parent_sender);

/// Convenience overload: parents are looked up among `month_emails` only.
SocialNet build_social_net(std::span<const ingest::Email> month_emails, int month_index);

/// Maps message id -> sender for parent lookups.
std::map<std::string, std::string> sender_index(std::span<const ingest::Email> emails);

/// Builds the developer-file network from the commits of one month.
/// Developers with no whitelisted files are not nodes.
TechNet build_tech_net(std::span<const ingest::Commit> month_commits, int month_index);

}  // namespace govmine::stnet
