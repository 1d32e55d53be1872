#include "govmine/institutional/evaluation.hpp"

#include "govmine/core/error.hpp"

namespace govmine::institutional {

EvalReport evaluate_counts(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
    EvalReport r;
    r.tp = tp;
    r.fp = fp;
    r.fn = fn;
    r.tn = tn;
    const auto d = [](std::size_t v) { return static_cast<double>(v); };
    r.precision = tp + fp > 0 ? d(tp) / d(tp + fp) : 0.0;
    r.recall = tp + fn > 0 ? d(tp) / d(tp + fn) : 0.0;
    r.f1 = r.precision + r.recall > 0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
    r.accuracy = r.total() > 0 ? d(tp + tn) / d(r.total()) : 0.0;
    return r;
}

EvalReport evaluate(const std::vector<bool>& gold, const std::vector<bool>& predicted) {
    if (gold.size() != predicted.size()) throw PreconditionError("gold and predicted label counts differ");
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (gold[i] && predicted[i]) ++tp;
        else if (!gold[i] && predicted[i]) ++fp;
        else if (gold[i]) ++fn;
        else ++tn;
    }
    return evaluate_counts(tp, fp, fn, tn);
}

nlohmann::json EvalReport::to_json() const {
    return {{"precision", precision}, {"recall", recall}, {"f1", f1},    {"accuracy", accuracy},
            {"tp", tp},               {"fp", fp},         {"fn", fn},    {"tn", tn}};
}

}  // namespace govmine::institutional
