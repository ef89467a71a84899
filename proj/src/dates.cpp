#include "skycast/dates.hpp"

#include <cstdio>

#include "skycast/errors.hpp"

namespace skycast {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) {
        return 29;
    }
    return lengths[m - 1];
}

} // namespace

std::int64_t Date::serial() const {
    // Howard Hinnant's days_from_civil.
    int y = year - (month <= 2);
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(day) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date Date::from_serial(std::int64_t days) {
    // Howard Hinnant's civil_from_days.
    days += 719468;
    const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

int Date::day_of_year() const {
    return static_cast<int>(serial() - Date{year, 1, 1}.serial()) + 1;
}

std::string Date::to_iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date Date::parse_iso(const std::string& text) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3 ||
        text.size() != 10) {
        throw DataError("invalid date '" + text + "' (expected YYYY-MM-DD)");
    }
    Date out{y, m, d};
    if (!out.is_valid()) {
        throw DataError("invalid calendar day '" + text + "'");
    }
    return out;
}

bool Date::is_valid() const {
    return month >= 1 && month <= 12 && day >= 1 && day <= days_in_month(year, month);
}

Season season_of_month(int month) {
    switch (month) {
    case 3:
    case 4:
    case 5:
        return Season::Spring;
    case 6:
    case 7:
    case 8:
        return Season::Summer;
    case 9:
    case 10:
    case 11:
        return Season::Autumn;
    default:
        return Season::Winter;
    }
}

const char* season_name(Season s) {
    switch (s) {
    case Season::Spring:
        return "spring";
    case Season::Summer:
        return "summer";
    case Season::Autumn:
        return "autumn";
    default:
        return "winter";
    }
}

Season parse_season(const std::string& name) {
    for (Season s : kAllSeasons) {
        if (name == season_name(s)) {
            return s;
        }
    }
    throw DataError("unknown season '" + name + "'");
}

} // namespace skycast
