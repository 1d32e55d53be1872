#include "govmine/topics/volumes.hpp"

#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "govmine/core/error.hpp"
#include "govmine/core/text.hpp"

namespace govmine::topics {

std::vector<double> center(std::span<const double> values) {
    std::vector<double> out(values.begin(), values.end());
    if (out.empty()) return out;
    const double mean = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
    for (auto& v : out) v -= mean;
    return out;
}

std::vector<TopicVolume> topic_volumes(const TopicModel& model, const Corpus& corpus,
                                       std::span<const DocumentMeta> meta, int horizon) {
    if (meta.size() != corpus.docs.size()) throw PreconditionError("document metadata does not match the corpus");
    if (model.doc_topic.size() != corpus.docs.size()) throw PreconditionError("model was fitted on another corpus");
    const auto K = static_cast<std::size_t>(model.K);
    std::map<ingest::Outcome, std::set<int>> observed;
    std::map<std::tuple<ingest::Outcome, std::size_t, int>, double> volume;
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
        const auto& m = meta[d];
        if (m.month_index < 0 || m.month_index >= horizon) continue;
        observed[m.group].insert(m.month_index);
        for (int w : corpus.docs[d]) {
            std::size_t best = 0;
            double best_p = -1;
            for (std::size_t k = 0; k < K; ++k) {
                const double p = model.doc_topic[d][k] * model.topic_word[k][static_cast<std::size_t>(w)];
                if (p > best_p) {
                    best_p = p;
                    best = k;
                }
            }
            volume[{m.group, best, m.month_index}] += 1.0;
        }
    }
    std::vector<TopicVolume> rows;
    for (const auto& [group, months] : observed) {
        for (std::size_t k = 0; k < K; ++k) {
            std::vector<double> raw;
            for (int month : months) {
                auto it = volume.find({group, k, month});
                raw.push_back(it == volume.end() ? 0.0 : it->second);
            }
            const auto centered = center(raw);
            std::size_t i = 0;
            for (int month : months) {
                rows.push_back({group, static_cast<int>(k), month, raw[i], centered[i]});
                ++i;
            }
        }
    }
    return rows;
}

void write_topic_volumes_csv(const std::filesystem::path& path, std::span<const TopicVolume> rows,
                             std::span<const std::string> preamble) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& line : preamble) out << "# " << line << '\n';
    out << kTopicVolumesHeader << '\n';
    for (const auto& r : rows)
        out << ingest::to_string(r.group) << ',' << r.topic << ',' << r.month_index << ','
            << text::format_double(r.raw) << ',' << text::format_double(r.centered) << '\n';
}

}  // namespace govmine::topics
