#include "govmine/pipeline/manifest.hpp"

#include <chrono>
#include <fstream>

#include "govmine/core/digest.hpp"
#include "govmine/core/error.hpp"
#include "govmine/core/time.hpp"

namespace govmine::pipeline {

namespace fs = std::filesystem;

DigestMap digest_tree(const fs::path& root) {
    DigestMap out;
    if (!fs::exists(root)) return out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        out[entry.path().lexically_relative(root).generic_string()] = sha256_file(entry.path());
    }
    return out;
}

DigestMap digest_files(const fs::path& root, const std::vector<fs::path>& files) {
    DigestMap out;
    for (const auto& f : files) {
        const auto full = f.is_absolute() ? f : root / f;
        if (!fs::is_regular_file(full)) continue;
        out[full.lexically_relative(root).generic_string()] = sha256_file(full);
    }
    return out;
}

nlohmann::json StageRecord::to_json() const {
    return {{"name", name},       {"started_at", started_at}, {"finished_at", finished_at},
            {"status", status},   {"inputs", inputs},         {"outputs", outputs},
            {"counts", counts}};
}

StageRecord StageRecord::from_json(const nlohmann::json& j) {
    StageRecord r;
    r.name = j.at("name").get<std::string>();
    r.started_at = j.value("started_at", "");
    r.finished_at = j.value("finished_at", "");
    r.status = j.value("status", "ok");
    r.inputs = j.value("inputs", DigestMap{});
    r.outputs = j.value("outputs", DigestMap{});
    r.counts = j.value("counts", nlohmann::json::object());
    return r;
}

RunManifest::RunManifest(std::string config_hash, std::uint64_t seed, nlohmann::json config)
    : config_hash_(std::move(config_hash)), seed_(seed), config_(std::move(config)) {}

RunManifest RunManifest::load_or_create(const fs::path& path, const std::string& config_hash, std::uint64_t seed,
                                        const nlohmann::json& config) {
    RunManifest m(config_hash, seed, config);
    if (!fs::exists(path)) return m;
    try {
        std::ifstream in(path);
        const auto j = nlohmann::json::parse(in);
        // Stages produced under another configuration are stale.
        if (j.value("config_hash", "") != config_hash) return m;
        for (const auto& [name, s] : j.at("stages").items()) m.stages_[name] = StageRecord::from_json(s);
    } catch (const nlohmann::json::exception&) {
        return m;
    }
    return m;
}

void RunManifest::set_stage(StageRecord record) { stages_[record.name] = std::move(record); }

const StageRecord* RunManifest::stage(const std::string& name) const {
    auto it = stages_.find(name);
    return it == stages_.end() ? nullptr : &it->second;
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json stages = nlohmann::json::object();
    for (const auto& [name, s] : stages_) stages[name] = s.to_json();
    return {{"config_hash", config_hash_}, {"seed", seed_}, {"config", config_}, {"stages", stages}};
}

void RunManifest::save(const fs::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << to_json().dump(2) << '\n';
}

std::string utc_now() {
    return format_iso8601(std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()));
}

}  // namespace govmine::pipeline
