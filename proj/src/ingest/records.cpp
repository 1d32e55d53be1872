#include "govmine/ingest/records.hpp"

#include "govmine/core/error.hpp"
#include "govmine/core/text.hpp"

namespace govmine::ingest {

std::string_view to_string(Outcome o) noexcept {
    return o == Outcome::Graduated ? "graduated" : "retired";
}

std::string_view to_string(Role r) noexcept {
    switch (r) {
        case Role::Mentor: return "mentor";
        case Role::Committer: return "committer";
        case Role::Contributor: return "contributor";
    }
    return "contributor";
}

Outcome parse_outcome(std::string_view s) {
    auto v = text::to_lower(text::trim(s));
    if (v == "graduated") return Outcome::Graduated;
    if (v == "retired") return Outcome::Retired;
    throw IngestError("unknown outcome label '" + std::string(s) + "'");
}

Role parse_role(std::string_view s) {
    auto v = text::to_lower(text::trim(s));
    if (v == "mentor") return Role::Mentor;
    if (v == "committer") return Role::Committer;
    if (v == "contributor") return Role::Contributor;
    throw IngestError("unknown role '" + std::string(s) + "'");
}

}  // namespace govmine::ingest
