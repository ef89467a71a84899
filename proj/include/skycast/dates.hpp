#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace skycast {

// Proleptic Gregorian calendar day. Conversions to/from a serial day count
// (days since 1970-01-01) use the standard civil-calendar algorithms, so date
// arithmetic is exact over the whole supported range.
struct Date {
    int year = 1970;
    int month = 1; // 1..12
    int day = 1;   // 1..31

    auto operator<=>(const Date&) const = default;

    // Days since 1970-01-01 (negative before).
    std::int64_t serial() const;
    static Date from_serial(std::int64_t days);

    Date plus_days(std::int64_t n) const { return from_serial(serial() + n); }
    int day_of_year() const;

    // "YYYY-MM-DD"
    std::string to_iso() const;
    // Throws DataError on malformed input or an invalid calendar day.
    static Date parse_iso(const std::string& text);

    bool is_valid() const;
};

enum class Season { Spring, Summer, Autumn, Winter };

// Spring = Mar-May, Summer = Jun-Aug, Autumn = Sep-Nov, Winter = Dec-Feb.
Season season_of_month(int month);
const char* season_name(Season s);
// Accepts the lowercase season names; throws DataError otherwise.
Season parse_season(const std::string& name);

inline constexpr Season kAllSeasons[4] = {Season::Spring, Season::Summer, Season::Autumn,
                                          Season::Winter};

} // namespace skycast
