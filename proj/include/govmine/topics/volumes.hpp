#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "govmine/ingest/records.hpp"
#include "govmine/topics/lda.hpp"

namespace govmine::topics {

struct DocumentMeta {
    std::string project_id;
    int month_index = 0;
    ingest::Outcome group = ingest::Outcome::Graduated;
};

struct TopicVolume {
    ingest::Outcome group = ingest::Outcome::Graduated;
    int topic = 0;
    int month_index = 0;
    double raw = 0;
    double centered = 0;
};

/// Subtracts the mean.
std::vector<double> center(std::span<const double> values);

/// Each token of document d goes to argmax_k theta[d][k] * phi[k][w] (ties:
/// lower k). Volumes are summed per (group, topic, month < horizon). A month
/// is observed for a group when some document of that group falls in it;
/// centering subtracts the per-(group, topic) mean over observed months.
/// Rows are ordered by group, topic, month.
std::vector<TopicVolume> topic_volumes(const TopicModel& model, const Corpus& corpus,
                                       std::span<const DocumentMeta> meta, int horizon = 24);

void write_topic_volumes_csv(const std::filesystem::path& path, std::span<const TopicVolume> rows,
                             std::span<const std::string> preamble = {});

inline constexpr std::string_view kTopicVolumesHeader = "group,topic_id,month_index,raw,centered";

}  // namespace govmine::topics
