#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "govmine/ingest/records.hpp"
#include "govmine/stnet/metrics.hpp"

namespace govmine::stnet {

inline constexpr std::array<std::string_view, 8> kSocioTechnicalVariables{
    "s_num_nodes",     "s_graph_density",  "s_avg_clustering_coef", "s_weighted_mean_degree",
    "t_graph_density", "t_num_dev_nodes",  "t_num_file_nodes",      "t_num_file_per_dev"};

inline constexpr std::array<std::string_view, 3> kInstitutionalVariables{"num_IS_mentor", "num_IS_committer",
                                                                         "num_IS_contributor"};

/// All 11 panel variables in CSV column order.
std::vector<std::string> panel_variables();

struct RoleCounts {
    double mentor = 0;
    double committer = 0;
    double contributor = 0;
};

using ProjectMonth = std::pair<std::string, int>;

/// One project's dense monthly series.
struct ProjectSeries {
    std::string project_id;
    ingest::Outcome group = ingest::Outcome::Graduated;
    std::vector<bool> inactive;  // per month, month 0..n-1
    std::map<std::string, std::vector<double>, std::less<>> values;
    /// Optional observation mask (true = retained); empty means all retained.
    std::map<std::string, std::vector<bool>, std::less<>> retained;

    std::size_t length() const { return inactive.size(); }
    const std::vector<double>& series(std::string_view variable) const;
    bool is_retained(std::string_view variable, std::size_t month) const;
};

/// Project x month x variable table.
struct PanelSeries {
    std::vector<ProjectSeries> projects;  // sorted by project id

    const ProjectSeries* find(std::string_view project_id) const;
};

/// Assembles dense per-project series from month 0 to the last month that has
/// a metric row. Months without a row are zero-filled and flagged inactive.
/// Conflicting duplicate (project, month) rows throw ConsistencyError.
PanelSeries assemble_panel(std::span<const MetricRow> rows, const std::map<ProjectMonth, RoleCounts>& is_counts,
                           const std::map<std::string, ingest::Outcome>& groups);

struct SummaryStats {
    std::size_t n = 0;
    double mean = 0;
    double sd = 0;  // sample standard deviation
    double min = 0;
    double q25 = 0;
    double q75 = 0;
    double max = 0;
};

/// Linear-interpolation quantile of sorted data (p in [0,1]).
double quantile_sorted(std::span<const double> sorted, double p);

SummaryStats summarize(std::vector<double> values);

/// Summary of one variable over all retained project-months; optionally
/// excluding inactive months.
SummaryStats summarize_variable(const PanelSeries& panel, std::string_view variable, bool exclude_inactive);

/// metrics.csv with the fixed header. `preamble` lines are written first as
/// '#' comments.
void write_metrics_csv(const std::filesystem::path& path, const PanelSeries& panel,
                       std::span<const std::string> preamble = {});
PanelSeries read_metrics_csv(const std::filesystem::path& path, const std::map<std::string, ingest::Outcome>& groups);

inline constexpr std::string_view kMetricsHeader =
    "project,month_index,s_num_nodes,s_graph_density,s_avg_clustering_coef,s_weighted_mean_degree,t_graph_density,"
    "t_num_dev_nodes,t_num_file_nodes,t_num_file_per_dev,num_IS_mentor,num_IS_committer,num_IS_contributor,"
    "inactive_flag";

}  // namespace govmine::stnet
