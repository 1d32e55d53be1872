#pragma once

#include <string>

#include "govmine/stnet/networks.hpp"

namespace govmine::stnet {

struct SocialMetrics {
    double num_nodes = 0;
    double graph_density = 0;
    double avg_clustering_coef = 0;
    double weighted_mean_degree = 0;
};

struct TechMetrics {
    double graph_density = 0;
    double num_dev_nodes = 0;
    double num_file_nodes = 0;
    double num_file_per_dev = 0;
};

SocialMetrics social_metrics(const SocialNet& net);
TechMetrics tech_metrics(const TechNet& net);

/// Local clustering of every node on the undirected, unweighted projection
/// (nodes with degree < 2 get 0), in node order.
std::vector<double> local_clustering(const SocialNet& net);

struct MetricRow {
    std::string project_id;
    int month_index = 0;
    SocialMetrics social;
    TechMetrics tech;

    bool operator==(const MetricRow&) const;
};

}  // namespace govmine::stnet
