#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "govmine/stats/adf.hpp"
#include "govmine/stats/granger.hpp"
#include "govmine/stats/tests.hpp"
#include "govmine/stnet/panel.hpp"

namespace govmine::stats {

/// Masks, per variable, observations strictly above the (1 - fraction)
/// quantile over all project-months. Throws PreconditionError unless
/// fraction lies in (0, 0.5). Returns the number of masked observations per
/// variable in panel_variables() order.
std::vector<std::size_t> trim_outliers(stnet::PanelSeries& panel, double fraction = 0.02);

/// Months from the first to the last active month (inclusive); empty when the
/// project never had activity.
std::pair<std::size_t, std::size_t> active_span(const stnet::ProjectSeries& project);

enum class NonstationaryPolicy { Exclude, Difference };

struct StationarityRow {
    std::string project_id;
    ingest::Outcome group = ingest::Outcome::Graduated;
    std::string variable;
    std::size_t length = 0;
    std::optional<AdfResult> adf;
    bool stationary = false;
    std::string note;  // "", "too_short", "constant", "singular"
};

/// ADF per (project, variable) over the active span.
std::vector<StationarityRow> stationarity_table(const stnet::PanelSeries& panel,
                                                std::span<const std::string> variables, double alpha = 0.05);

struct GridOptions {
    int lag = 2;
    double alpha = 0.01;
    double adf_alpha = 0.05;
    NonstationaryPolicy nonstationary = NonstationaryPolicy::Exclude;
    bool small_sample = false;
    std::vector<std::string> st_variables{"s_num_nodes",     "s_graph_density",  "s_weighted_mean_degree",
                                          "t_num_dev_nodes", "t_num_file_nodes", "t_num_file_per_dev"};
    std::vector<std::string> is_variables{"num_IS_mentor", "num_IS_committer", "num_IS_contributor"};
    unsigned jobs = 1;
};

struct GridTest {
    ingest::Outcome group = ingest::Outcome::Graduated;
    std::string x_var;
    std::string y_var;
    int lag = 2;
    std::optional<GrangerResult> result;  // empty when untestable
    std::string untestable_reason;
    std::optional<AdjustedTest> adjusted;
    std::vector<std::string> excluded_nonstationary;
};

struct GrangerEdge {
    ingest::Outcome group = ingest::Outcome::Graduated;
    std::string from;
    std::string to;
    bool bidirectional = false;
};

struct GridResult {
    std::vector<GridTest> tests;
    std::vector<StationarityRow> stationarity;
    std::vector<GrangerEdge> edges;
};

/// Every ordered IS/ST pair in both directions, per group (2 * |IS| * |ST|
/// tests per group). Testable results are BH-adjusted jointly. Throws
/// ConsistencyError naming a variable missing from the panel.
GridResult run_grid(const stnet::PanelSeries& panel, const GridOptions& options = {});

/// Units for one (x, y) pair and group after the stationarity policy.
std::vector<PanelUnit> granger_units(const stnet::PanelSeries& panel, ingest::Outcome group, const std::string& x_var,
                                     const std::string& y_var, const std::vector<StationarityRow>& stationarity,
                                     const GridOptions& options,
                                     std::vector<std::string>* excluded_nonstationary = nullptr);

struct GroupTestRow {
    std::string variable;
    std::size_t n_graduated = 0;
    std::size_t n_retired = 0;
    double mean_graduated = 0;
    double mean_retired = 0;
    double median_graduated = 0;
    double median_retired = 0;
    std::optional<MannWhitneyResult> test;  // empty when a group has no observations
};

/// Graduated vs retired over active, retained project-months.
std::vector<GroupTestRow> group_tests(const stnet::PanelSeries& panel);

void write_granger_csv(const std::filesystem::path& path, const GridResult& grid,
                       std::span<const std::string> preamble = {});
void write_stationarity_csv(const std::filesystem::path& path, std::span<const StationarityRow> rows,
                            std::span<const std::string> preamble = {});
void write_group_tests_csv(const std::filesystem::path& path, std::span<const GroupTestRow> rows,
                           std::span<const std::string> preamble = {});

inline constexpr std::string_view kGrangerHeader =
    "group,x_var,y_var,lag,n_projects,W_bar,Z_bar,raw_p,adjusted_p,significant";
inline constexpr std::string_view kStationarityHeader = "project,group,variable,length,lags,statistic,p_value,stationary,note";
inline constexpr std::string_view kGroupTestsHeader =
    "variable,n_graduated,n_retired,mean_graduated,mean_retired,median_graduated,median_retired,U,p_value,exact";

}  // namespace govmine::stats
