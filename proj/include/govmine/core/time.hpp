#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace govmine {

using Timestamp = std::chrono::sys_seconds;

struct CivilDate {
    int year = 1970;
    unsigned month = 1;  // 1..12
    unsigned day = 1;    // 1..31

    auto operator<=>(const CivilDate&) const = default;
};

std::int64_t days_from_civil(const CivilDate& d) noexcept;
CivilDate civil_from_days(std::int64_t days) noexcept;

Timestamp make_timestamp(const CivilDate& d, int hour = 0, int minute = 0, int second = 0) noexcept;
CivilDate to_civil(Timestamp t) noexcept;

/// Months since the epoch (year*12 + month-1) of a UTC instant.
int absolute_month(Timestamp t) noexcept;
int absolute_month(const CivilDate& d) noexcept;

/// Calendar-month index of `t` relative to the month containing `origin`.
/// Month 0 is the origin month; earlier instants give negative indices.
int month_index(Timestamp t, Timestamp origin) noexcept;

/// Shift a date by whole calendar months, clamping the day to the month length.
CivilDate add_months(const CivilDate& d, int months) noexcept;

/// RFC 5322 / RFC 2822 Date header, tolerant of common mailer deviations.
std::optional<Timestamp> parse_rfc2822_date(std::string_view text);

/// ISO-8601 timestamps ("2020-01-02T03:04:05+02:00", "2020-01-02 03:04:05 +0200",
/// "2020-01-02T03:04:05Z", bare dates).
std::optional<Timestamp> parse_iso8601(std::string_view text);

std::optional<CivilDate> parse_iso_date(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_iso8601(Timestamp t);
std::string format_iso_date(const CivilDate& d);

}  // namespace govmine
