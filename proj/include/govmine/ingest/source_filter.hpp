#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace govmine::ingest {

/// Whitelist of source and markup file types. Entries beginning with '.'
/// are extensions; others are exact file names (e.g. "Makefile").
class SourceFilter {
public:
    static SourceFilter parse(std::string_view list_text);
    static SourceFilter from_file(const std::filesystem::path& path);
    static SourceFilter defaults();

    bool is_source(std::string_view path) const;
    std::size_t size() const { return extensions_.size() + names_.size(); }

private:
    std::set<std::string, std::less<>> extensions_;  // lowercase, with leading '.'
    std::set<std::string, std::less<>> names_;       // lowercase file names
};

/// Strips SVN layout prefixes: "trunk/", "branches/<name>/", "tags/<name>/",
/// also when nested under a leading project directory ("proj/trunk/...").
std::string strip_svn_branch(std::string_view path);

}  // namespace govmine::ingest
