#include "govmine/core/time.hpp"

#include <array>
#include <cctype>
#include <charconv>

#include <fmt/format.h>

#include "govmine/core/text.hpp"

namespace govmine {

// Howard Hinnant's civil-calendar algorithms (proleptic Gregorian).
std::int64_t days_from_civil(const CivilDate& d) noexcept {
    const std::int64_t y = static_cast<std::int64_t>(d.year) - (d.month <= 2 ? 1 : 0);
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned mp = d.month > 2 ? d.month - 3 : d.month + 9;
    const unsigned doy = (153 * mp + 2) / 5 + d.day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) noexcept {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return CivilDate{static_cast<int>(y + (m <= 2 ? 1 : 0)), m, d};
}

Timestamp make_timestamp(const CivilDate& d, int hour, int minute, int second) noexcept {
    const std::int64_t secs = days_from_civil(d) * 86400 + hour * 3600 + minute * 60 + second;
    return Timestamp{std::chrono::seconds{secs}};
}

CivilDate to_civil(Timestamp t) noexcept {
    std::int64_t secs = t.time_since_epoch().count();
    std::int64_t days = secs / 86400;
    if (secs % 86400 < 0) --days;
    return civil_from_days(days);
}

int absolute_month(const CivilDate& d) noexcept {
    return d.year * 12 + static_cast<int>(d.month) - 1;
}

int absolute_month(Timestamp t) noexcept { return absolute_month(to_civil(t)); }

int month_index(Timestamp t, Timestamp origin) noexcept {
    return absolute_month(t) - absolute_month(origin);
}

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned month_length(int y, unsigned m) {
    static constexpr std::array<unsigned, 12> lengths{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && is_leap(y) ? 29 : lengths[m - 1];
}

}  // namespace

CivilDate add_months(const CivilDate& d, int months) noexcept {
    int total = absolute_month(d) + months;
    int y = total >= 0 ? total / 12 : (total - 11) / 12;
    auto m = static_cast<unsigned>(total - y * 12 + 1);
    unsigned day = std::min(d.day, month_length(y, m));
    return CivilDate{y, m, day};
}

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view s) : s_(s) {}

    void skip_space_and_comments() {
        for (;;) {
            while (pos_ < s_.size() && (std::isspace(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == ','))
                ++pos_;
            if (pos_ < s_.size() && s_[pos_] == '(') {
                int depth = 0;
                while (pos_ < s_.size()) {
                    if (s_[pos_] == '(') ++depth;
                    if (s_[pos_] == ')' && --depth == 0) {
                        ++pos_;
                        break;
                    }
                    ++pos_;
                }
                continue;
            }
            return;
        }
    }

    std::optional<int> number(int max_digits = 9) {
        skip_space_and_comments();
        std::size_t start = pos_;
        while (pos_ < s_.size() && pos_ - start < static_cast<std::size_t>(max_digits) &&
               std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (start == pos_) return std::nullopt;
        int v = 0;
        std::from_chars(s_.data() + start, s_.data() + pos_, v);
        last_len_ = pos_ - start;
        return v;
    }

    std::string_view word() {
        skip_space_and_comments();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return s_.substr(start, pos_ - start);
    }

    bool consume(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_space_and_comments();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    char peek_raw() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    std::size_t last_len() const { return last_len_; }
    bool done() const { return pos_ >= s_.size(); }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t last_len_ = 0;
};

std::optional<unsigned> month_from_name(std::string_view name) {
    static constexpr std::array<std::string_view, 12> names{"jan", "feb", "mar", "apr", "may", "jun",
                                                            "jul", "aug", "sep", "oct", "nov", "dec"};
    if (name.size() < 3) return std::nullopt;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (text::iequals(name.substr(0, 3), names[i])) return static_cast<unsigned>(i + 1);
    return std::nullopt;
}

std::optional<int> zone_offset_minutes(std::string_view zone) {
    struct Named {
        std::string_view name;
        int offset;
    };
    static constexpr std::array<Named, 11> named{{{"UT", 0},
                                                  {"UTC", 0},
                                                  {"GMT", 0},
                                                  {"Z", 0},
                                                  {"EST", -300},
                                                  {"EDT", -240},
                                                  {"CST", -360},
                                                  {"CDT", -300},
                                                  {"MST", -420},
                                                  {"MDT", -360},
                                                  {"PST", -480}}};
    if (text::iequals(zone, "PDT")) return -420;
    for (const auto& n : named)
        if (text::iequals(zone, n.name)) return n.offset;
    return std::nullopt;
}

}  // namespace

std::optional<Timestamp> parse_rfc2822_date(std::string_view input) {
    Cursor c(text::trim(input));
    std::optional<int> day;
    std::optional<unsigned> month;
    if (std::isalpha(static_cast<unsigned char>(c.peek()))) {
        // Either a weekday ("Tue,") or a month-first date ("Jun 3 2008").
        month = month_from_name(c.word());
        c.consume(',');
    }
    if (month) {
        day = c.number(2);
    } else {
        day = c.number(2);
        month = month_from_name(c.word());
    }
    if (!day || !month) return std::nullopt;
    auto year = c.number(4);
    if (!year) return std::nullopt;
    if (c.last_len() <= 2) *year += *year < 50 ? 2000 : 1900;
    else if (c.last_len() == 3) *year += 1900;

    int hour = 0, minute = 0, second = 0;
    if (auto h = c.number(2)) {
        hour = *h;
        if (!c.consume(':')) return std::nullopt;
        auto mi = c.number(2);
        if (!mi) return std::nullopt;
        minute = *mi;
        if (c.consume(':')) {
            auto se = c.number(2);
            if (!se) return std::nullopt;
            second = *se;
        }
    }

    int offset = 0;
    char z = c.peek();
    if (z == '+' || z == '-') {
        c.consume(z);
        auto hhmm = c.number(4);
        if (!hhmm) return std::nullopt;
        int v = *hhmm;
        if (c.last_len() <= 2) v *= 100;
        offset = (v / 100) * 60 + v % 100;
        if (z == '-') offset = -offset;
    } else if (std::isalpha(static_cast<unsigned char>(z))) {
        offset = zone_offset_minutes(c.word()).value_or(0);
    }

    if (*day < 1 || *day > 31 || hour > 23 || minute > 59 || second > 60) return std::nullopt;
    auto ts = make_timestamp(CivilDate{*year, *month, static_cast<unsigned>(*day)}, hour, minute,
                             std::min(second, 59));
    return ts - std::chrono::minutes{offset};
}

std::optional<CivilDate> parse_iso_date(std::string_view s) {
    s = text::trim(s);
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    int y = 0;
    unsigned m = 0, d = 0;
    if (std::from_chars(s.data(), s.data() + 4, y).ec != std::errc{}) return std::nullopt;
    if (std::from_chars(s.data() + 5, s.data() + 7, m).ec != std::errc{}) return std::nullopt;
    if (std::from_chars(s.data() + 8, s.data() + 10, d).ec != std::errc{}) return std::nullopt;
    if (m < 1 || m > 12 || d < 1 || d > month_length(y, m)) return std::nullopt;
    return CivilDate{y, m, d};
}

std::optional<Timestamp> parse_iso8601(std::string_view s) {
    s = text::trim(s);
    auto date = parse_iso_date(s);
    if (!date) return std::nullopt;
    if (s.size() == 10) return make_timestamp(*date);
    if (s[10] != 'T' && s[10] != ' ' && s[10] != 't') return std::nullopt;
    auto rest = s.substr(11);
    auto two = [](std::string_view v, int& out) {
        return v.size() >= 2 && std::from_chars(v.data(), v.data() + 2, out).ec == std::errc{};
    };
    int h = 0, mi = 0, se = 0;
    if (!two(rest, h) || rest.size() < 5 || rest[2] != ':' || !two(rest.substr(3), mi)) return std::nullopt;
    rest = rest.substr(5);
    if (!rest.empty() && rest[0] == ':') {
        if (!two(rest.substr(1), se)) return std::nullopt;
        rest = rest.substr(3);
    }
    if (!rest.empty() && (rest[0] == '.' || rest[0] == ',')) {
        std::size_t i = 1;
        while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) ++i;
        rest = rest.substr(i);
    }
    rest = text::trim(rest);
    int offset = 0;
    if (rest.empty() || rest == "Z" || rest == "z") {
        offset = 0;
    } else if (rest[0] == '+' || rest[0] == '-') {
        int oh = 0, om = 0;
        auto body = rest.substr(1);
        if (!two(body, oh)) return std::nullopt;
        body = body.substr(2);
        if (!body.empty() && body[0] == ':') body = body.substr(1);
        if (!body.empty() && !two(body, om)) return std::nullopt;
        offset = oh * 60 + om;
        if (rest[0] == '-') offset = -offset;
    } else {
        return std::nullopt;
    }
    if (h > 23 || mi > 59 || se > 60) return std::nullopt;
    return make_timestamp(*date, h, mi, std::min(se, 59)) - std::chrono::minutes{offset};
}

std::string format_iso8601(Timestamp t) {
    const std::int64_t secs = t.time_since_epoch().count();
    std::int64_t days = secs / 86400;
    std::int64_t rem = secs % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    auto d = civil_from_days(days);
    return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", d.year, d.month, d.day, rem / 3600,
                       (rem / 60) % 60, rem % 60);
}

std::string format_iso_date(const CivilDate& d) {
    return fmt::format("{:04}-{:02}-{:02}", d.year, d.month, d.day);
}

}  // namespace govmine
