#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace govmine::pipeline {

/// relative path -> sha256
using DigestMap = std::map<std::string, std::string>;

/// Digests of regular files under `root` (recursively), keyed by their path
/// relative to `root` with '/' separators.
DigestMap digest_tree(const std::filesystem::path& root);
DigestMap digest_files(const std::filesystem::path& root, const std::vector<std::filesystem::path>& files);

struct StageRecord {
    std::string name;
    std::string started_at;
    std::string finished_at;
    std::string status = "ok";
    DigestMap inputs;
    DigestMap outputs;
    nlohmann::json counts = nlohmann::json::object();

    nlohmann::json to_json() const;
    static StageRecord from_json(const nlohmann::json& j);
};

/// run_manifest.json: config hash, seed, and one record per stage. The only
/// file that carries wall-clock timestamps.
class RunManifest {
public:
    RunManifest() = default;
    RunManifest(std::string config_hash, std::uint64_t seed, nlohmann::json config);

    static RunManifest load_or_create(const std::filesystem::path& path, const std::string& config_hash,
                                      std::uint64_t seed, const nlohmann::json& config);
    void set_stage(StageRecord record);
    const StageRecord* stage(const std::string& name) const;
    void save(const std::filesystem::path& path) const;
    nlohmann::json to_json() const;

    const std::string& config_hash() const { return config_hash_; }

private:
    std::string config_hash_;
    std::uint64_t seed_ = 0;
    nlohmann::json config_;
    std::map<std::string, StageRecord> stages_;
};

/// Current UTC time, ISO-8601.
std::string utc_now();

}  // namespace govmine::pipeline
