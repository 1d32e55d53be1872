#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "govmine/core/time.hpp"

namespace govmine::pipeline {

struct SimulationOptions {
    std::uint64_t seed = 20240117;
    int projects = 3;
    /// Share of threads that receive gold sentence labels.
    double gold_thread_fraction = 0.4;
};

struct SimulationSummary {
    std::size_t emails = 0;
    std::size_t bot_emails = 0;
    std::size_t commits = 0;
    std::size_t gold_sentences = 0;
};

/// Writes a synthetic multi-project corpus under `dir`: per-project mbox
/// archives and commits.jsonl, projects.csv, roster.csv, aliases.csv,
/// gold.jsonl, policies.txt and a config.toml that points at them.
/// Output is a pure function of the options.
SimulationSummary simulate_corpus(const std::filesystem::path& dir, const SimulationOptions& options = {});

/// "Tue, 05 Jan 2010 13:04:05 +0000"
std::string format_rfc2822(Timestamp t);

}  // namespace govmine::pipeline
