#include "govmine/ingest/bots.hpp"

#include <fstream>
#include <sstream>

#include "govmine/core/embedded.hpp"
#include "govmine/core/error.hpp"
#include "govmine/core/text.hpp"

namespace govmine::ingest {

void BotRules::add(Field field, std::string pattern) {
    try {
        std::regex re(pattern, std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
        rules_.push_back(Rule{field, std::move(pattern), std::move(re)});
    } catch (const std::regex_error& e) {
        throw ConfigError("invalid bot rule '" + pattern + "': " + e.what());
    }
}

BotRules BotRules::parse(std::string_view rules_text) {
    BotRules rules;
    for (auto raw : text::split_lines(rules_text)) {
        auto line = text::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        Field field = Field::Sender;
        if (text::starts_with_icase(line, "sender:")) {
            line.remove_prefix(7);
        } else if (text::starts_with_icase(line, "subject:")) {
            field = Field::Subject;
            line.remove_prefix(8);
        } else if (text::starts_with_icase(line, "body:")) {
            field = Field::Body;
            line.remove_prefix(5);
        }
        rules.add(field, std::string(text::trim(line)));
    }
    return rules;
}

BotRules BotRules::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read bot rules " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

BotRules BotRules::defaults() {
    static const BotRules cached = parse(embedded::bot_rules());
    return cached;
}

bool BotRules::matches(std::string_view sender, std::string_view subject, std::string_view body) const {
    for (const auto& r : rules_) {
        std::string_view target = r.field == Field::Sender ? sender : r.field == Field::Subject ? subject : body;
        if (std::regex_search(target.begin(), target.end(), r.compiled)) return true;
    }
    return false;
}

bool detect_bot(std::string_view sender, std::string_view subject, std::string_view body, const BotRules& rules) {
    return rules.matches(sender, subject, body);
}

bool detect_bot(std::string_view sender, std::string_view subject, std::string_view body) {
    static const BotRules rules = BotRules::defaults();
    return rules.matches(sender, subject, body);
}

}  // namespace govmine::ingest
