#include "govmine/ingest/source_filter.hpp"

#include <fstream>
#include <sstream>

#include "govmine/core/embedded.hpp"
#include "govmine/core/error.hpp"
#include "govmine/core/text.hpp"

namespace govmine::ingest {

SourceFilter SourceFilter::parse(std::string_view list_text) {
    SourceFilter f;
    for (auto raw : text::split_lines(list_text)) {
        auto line = text::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto entry = text::to_lower(line);
        if (entry[0] == '.')
            f.extensions_.insert(std::move(entry));
        else
            f.names_.insert(std::move(entry));
    }
    return f;
}

SourceFilter SourceFilter::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read extension list " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

SourceFilter SourceFilter::defaults() {
    static const SourceFilter cached = parse(embedded::source_extensions());
    return cached;
}

bool SourceFilter::is_source(std::string_view path) const {
    auto slash = path.find_last_of('/');
    auto name = text::to_lower(slash == std::string_view::npos ? path : path.substr(slash + 1));
    if (name.empty()) return false;
    if (names_.count(name)) return true;
    // Try the longest compound extension first (".d.ts" style entries).
    for (std::size_t dot = name.find('.', 1); dot != std::string::npos; dot = name.find('.', dot + 1))
        if (extensions_.count(std::string_view(name).substr(dot))) return true;
    return false;
}

std::string strip_svn_branch(std::string_view path) {
    auto parts = text::split(path, '/');
    std::vector<std::string> kept;
    std::size_t i = 0;
    while (i < parts.size() && parts[i].empty()) ++i;
    // Look for the layout marker within the first two components.
    for (std::size_t probe = i; probe < parts.size() && probe <= i + 1; ++probe) {
        const auto& p = parts[probe];
        if (p == "trunk") {
            i = probe + 1;
            break;
        }
        if ((p == "branches" || p == "tags") && probe + 1 < parts.size()) {
            i = probe + 2;
            break;
        }
    }
    std::string out;
    for (; i < parts.size(); ++i) {
        if (parts[i].empty()) continue;
        if (!out.empty()) out.push_back('/');
        out += parts[i];
    }
    return out;
}

}  // namespace govmine::ingest
