#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

namespace govmine::institutional {

struct EvalReport {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    double accuracy = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
    nlohmann::json to_json() const;
};

EvalReport evaluate(const std::vector<bool>& gold, const std::vector<bool>& predicted);
/// From confusion counts.
EvalReport evaluate_counts(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn);

}  // namespace govmine::institutional
