#pragma once

#include <filesystem>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace govmine::ingest {

/// Case-insensitive regex rules over sender, subject, or body.
///
/// Rule file syntax: one rule per line, `field:regex` where field is
/// `sender`, `subject` or `body`; a bare regex applies to the sender.
/// Blank lines and lines starting with '#' are ignored.
class BotRules {
public:
    enum class Field { Sender, Subject, Body };

    struct Rule {
        Field field;
        std::string pattern;
        std::regex compiled;
    };

    BotRules() = default;

    static BotRules parse(std::string_view rules_text);
    static BotRules from_file(const std::filesystem::path& path);
    /// The bundled default rule set.
    static BotRules defaults();

    void add(Field field, std::string pattern);
    bool matches(std::string_view sender, std::string_view subject, std::string_view body) const;
    const std::vector<Rule>& rules() const { return rules_; }

private:
    std::vector<Rule> rules_;
};

bool detect_bot(std::string_view sender, std::string_view subject, std::string_view body, const BotRules& rules);
/// Uses the default rule set.
bool detect_bot(std::string_view sender, std::string_view subject, std::string_view body);

}  // namespace govmine::ingest
