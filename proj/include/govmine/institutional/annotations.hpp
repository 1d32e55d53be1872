#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "govmine/ingest/records.hpp"

namespace govmine::institutional {

/// email_id -> (sentence_index -> label)
using GoldAnnotations = std::map<std::string, std::map<std::size_t, bool>>;

/// Reads {"email_id", "sentence_index", "label": 0|1} lines.
GoldAnnotations read_gold_jsonl(const std::filesystem::path& path);
void write_gold_jsonl(const std::filesystem::path& path, const GoldAnnotations& gold);

/// Copies gold labels into the sentences of annotated emails. Returns the
/// number of emails whose every sentence received a label.
std::size_t apply_gold(std::span<ingest::Email> emails, const GoldAnnotations& gold);

/// Writes {"email_id", "sentence_index", "predicted": 0|1} lines (plus "label"
/// when a gold label is present), in email then sentence order.
void write_predictions_jsonl(const std::filesystem::path& path, std::span<const ingest::Email> emails,
                             const std::map<std::string, std::vector<bool>>& predictions);

struct ThreadSplit {
    std::vector<std::size_t> train;  // email indices
    std::vector<std::size_t> test;
};

/// Seeded thread-level split: whole threads are held out, the number of
/// held-out threads is round(fraction * threads) but at least one when there
/// are two or more threads.
ThreadSplit split_by_thread(std::span<const ingest::Email> emails, double holdout_fraction, std::uint64_t seed);

}  // namespace govmine::institutional
