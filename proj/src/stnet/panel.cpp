#include "govmine/stnet/panel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "govmine/core/error.hpp"
#include "govmine/core/text.hpp"

namespace govmine::stnet {

std::vector<std::string> panel_variables() {
    std::vector<std::string> v;
    v.reserve(kSocioTechnicalVariables.size() + kInstitutionalVariables.size());
    for (auto name : kSocioTechnicalVariables) v.emplace_back(name);
    for (auto name : kInstitutionalVariables) v.emplace_back(name);
    return v;
}

const std::vector<double>& ProjectSeries::series(std::string_view variable) const {
    auto it = values.find(variable);
    if (it == values.end())
        throw ConsistencyError("project " + project_id + " has no variable '" + std::string(variable) + "'");
    return it->second;
}

bool ProjectSeries::is_retained(std::string_view variable, std::size_t month) const {
    auto it = retained.find(variable);
    return it == retained.end() || it->second.empty() || it->second.at(month);
}

const ProjectSeries* PanelSeries::find(std::string_view project_id) const {
    for (const auto& p : projects)
        if (p.project_id == project_id) return &p;
    return nullptr;
}

namespace {

std::array<double, 11> row_values(const MetricRow& r, const RoleCounts& is) {
    return {r.social.num_nodes,      r.social.graph_density, r.social.avg_clustering_coef,
            r.social.weighted_mean_degree, r.tech.graph_density, r.tech.num_dev_nodes,
            r.tech.num_file_nodes,   r.tech.num_file_per_dev, is.mentor,
            is.committer,            is.contributor};
}

}  // namespace

PanelSeries assemble_panel(std::span<const MetricRow> rows, const std::map<ProjectMonth, RoleCounts>& is_counts,
                           const std::map<std::string, ingest::Outcome>& groups) {
    std::map<ProjectMonth, const MetricRow*> by_key;
    std::set<std::string> project_ids;
    for (const auto& [id, g] : groups) project_ids.insert(id);
    for (const auto& r : rows) {
        if (r.month_index < 0)
            throw PreconditionError("metric row for " + r.project_id + " has negative month index");
        auto [it, inserted] = by_key.emplace(ProjectMonth{r.project_id, r.month_index}, &r);
        if (!inserted && !(*it->second == r))
            throw ConsistencyError("conflicting metric rows for " + r.project_id + " month " +
                                   std::to_string(r.month_index));
        project_ids.insert(r.project_id);
    }

    const auto variables = panel_variables();
    PanelSeries panel;
    for (const auto& id : project_ids) {
        ProjectSeries ps;
        ps.project_id = id;
        if (auto g = groups.find(id); g != groups.end()) ps.group = g->second;
        int last = -1;
        for (auto it = by_key.lower_bound({id, 0}); it != by_key.end() && it->first.first == id; ++it)
            last = std::max(last, it->first.second);
        const auto n = static_cast<std::size_t>(last + 1);
        ps.inactive.assign(n, true);
        for (const auto& v : variables) ps.values[v].assign(n, 0.0);
        for (std::size_t m = 0; m < n; ++m) {
            auto it = by_key.find({id, static_cast<int>(m)});
            if (it == by_key.end()) continue;
            ps.inactive[m] = false;
            RoleCounts is;
            if (auto c = is_counts.find({id, static_cast<int>(m)}); c != is_counts.end()) is = c->second;
            auto vals = row_values(*it->second, is);
            for (std::size_t k = 0; k < variables.size(); ++k) ps.values[variables[k]][m] = vals[k];
        }
        panel.projects.push_back(std::move(ps));
    }
    return panel;
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) return 0.0;
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

SummaryStats summarize(std::vector<double> values) {
    SummaryStats s;
    s.n = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    double sum = 0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    s.min = values.front();
    s.max = values.back();
    s.q25 = quantile_sorted(values, 0.25);
    s.q75 = quantile_sorted(values, 0.75);
    return s;
}

SummaryStats summarize_variable(const PanelSeries& panel, std::string_view variable, bool exclude_inactive) {
    std::vector<double> values;
    for (const auto& p : panel.projects) {
        const auto& s = p.series(variable);
        for (std::size_t m = 0; m < s.size(); ++m) {
            if (exclude_inactive && p.inactive[m]) continue;
            if (!p.is_retained(variable, m)) continue;
            values.push_back(s[m]);
        }
    }
    return summarize(std::move(values));
}

void write_metrics_csv(const std::filesystem::path& path, const PanelSeries& panel,
                       std::span<const std::string> preamble) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& line : preamble) out << "# " << line << '\n';
    out << kMetricsHeader << '\n';
    const auto variables = panel_variables();
    for (const auto& p : panel.projects) {
        for (std::size_t m = 0; m < p.length(); ++m) {
            out << text::csv_escape(p.project_id) << ',' << m;
            for (const auto& v : variables) out << ',' << text::format_double(p.values.at(v)[m]);
            out << ',' << (p.inactive[m] ? 1 : 0) << '\n';
        }
    }
}

PanelSeries read_metrics_csv(const std::filesystem::path& path, const std::map<std::string, ingest::Outcome>& groups) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    std::string line;
    bool header_seen = false;
    const auto variables = panel_variables();
    std::map<std::string, ProjectSeries> by_project;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != kMetricsHeader) throw Error(path.string() + ": unexpected metrics header");
            header_seen = true;
            continue;
        }
        auto f = text::parse_csv_line(line);
        if (f.size() != variables.size() + 3) throw Error(path.string() + ": malformed row '" + line + "'");
        auto& ps = by_project[f[0]];
        ps.project_id = f[0];
        const auto month = static_cast<std::size_t>(std::stoul(f[1]));
        if (month != ps.inactive.size())
            throw ConsistencyError(path.string() + ": months of " + f[0] + " are not dense and ordered");
        for (std::size_t k = 0; k < variables.size(); ++k) ps.values[variables[k]].push_back(std::stod(f[2 + k]));
        ps.inactive.push_back(f.back() == "1");
    }
    PanelSeries panel;
    for (const auto& [id, g] : groups)
        if (!by_project.count(id)) by_project[id].project_id = id;
    for (auto& [id, ps] : by_project) {
        if (auto g = groups.find(id); g != groups.end()) ps.group = g->second;
        for (const auto& v : variables) ps.values[v];  // empty projects still carry every variable
        panel.projects.push_back(std::move(ps));
    }
    return panel;
}

}  // namespace govmine::stnet
