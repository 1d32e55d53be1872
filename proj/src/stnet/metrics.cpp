#include "govmine/stnet/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

namespace govmine::stnet {

std::vector<double> local_clustering(const SocialNet& net) {
    const auto& nodes = net.nodes();
    std::map<NodeId, std::size_t> index;
    for (const auto& n : nodes) index.emplace(n, index.size());
    std::vector<std::set<std::size_t>> adj(nodes.size());
    for (const auto& [edge, w] : net.edges()) {
        auto a = index.at(edge.first);
        auto b = index.at(edge.second);
        adj[a].insert(b);
        adj[b].insert(a);
    }
    std::vector<double> cc(nodes.size(), 0.0);
    for (std::size_t v = 0; v < adj.size(); ++v) {
        const auto k = adj[v].size();
        if (k < 2) continue;
        std::size_t links = 0;
        for (auto it = adj[v].begin(); it != adj[v].end(); ++it)
            for (auto jt = std::next(it); jt != adj[v].end(); ++jt)
                if (adj[*it].count(*jt)) ++links;
        cc[v] = static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1) / 2.0);
    }
    return cc;
}

SocialMetrics social_metrics(const SocialNet& net) {
    SocialMetrics m;
    const auto n = static_cast<double>(net.nodes().size());
    m.num_nodes = n;
    if (net.nodes().size() >= 2) m.graph_density = static_cast<double>(net.edges().size()) / (n * (n - 1.0));
    if (net.nodes().empty()) return m;
    auto cc = local_clustering(net);
    double sum = 0;
    for (double c : cc) sum += c;
    m.avg_clustering_coef = sum / n;
    // Each edge weight counts once toward its source's out-degree and once
    // toward its target's in-degree.
    double total = 0;
    for (const auto& [edge, w] : net.edges()) total += 2.0 * w;
    m.weighted_mean_degree = total / n;
    return m;
}

TechMetrics tech_metrics(const TechNet& net) {
    TechMetrics m;
    const auto devs = static_cast<double>(net.dev_nodes().size());
    const auto files = static_cast<double>(net.file_nodes().size());
    m.num_dev_nodes = devs;
    m.num_file_nodes = files;
    if (devs >= 1 && files >= 1) m.graph_density = static_cast<double>(net.edges().size()) / (devs * files);
    if (devs >= 1) m.num_file_per_dev = files / devs;
    return m;
}

bool MetricRow::operator==(const MetricRow& o) const {
    auto same_s = [](const SocialMetrics& a, const SocialMetrics& b) {
        return a.num_nodes == b.num_nodes && a.graph_density == b.graph_density &&
               a.avg_clustering_coef == b.avg_clustering_coef && a.weighted_mean_degree == b.weighted_mean_degree;
    };
    auto same_t = [](const TechMetrics& a, const TechMetrics& b) {
        return a.graph_density == b.graph_density && a.num_dev_nodes == b.num_dev_nodes &&
               a.num_file_nodes == b.num_file_nodes && a.num_file_per_dev == b.num_file_per_dev;
    };
    return project_id == o.project_id && month_index == o.month_index && same_s(social, o.social) &&
           same_t(tech, o.tech);
}

}  // namespace govmine::stnet
