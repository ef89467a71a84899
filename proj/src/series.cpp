#include "skycast/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "skycast/errors.hpp"
#include "skycast/rng.hpp"

namespace skycast {

namespace {

constexpr double kTempMin = -60.0;
constexpr double kTempMax = 60.0;
constexpr const char* kCsvHeader = "date,temperature_c,humidity_pct";

double parse_number(const std::string& field, std::size_t line_no, const char* what) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        std::ostringstream msg;
        msg << "line " << line_no << ": malformed " << what << " '" << field << "'";
        throw DataError(msg.str());
    }
    return value;
}

void check_record(const DailyRecord& rec, std::size_t line_no) {
    std::ostringstream msg;
    if (!std::isfinite(rec.temperature_c) || rec.temperature_c < kTempMin ||
        rec.temperature_c > kTempMax) {
        msg << "line " << line_no << ": temperature " << rec.temperature_c
            << " outside sanity band [" << kTempMin << ", " << kTempMax << "]";
        throw DataError(msg.str());
    }
    if (!std::isfinite(rec.humidity_pct) || rec.humidity_pct < 0.0 || rec.humidity_pct > 100.0) {
        msg << "line " << line_no << ": humidity " << rec.humidity_pct << " outside [0, 100]";
        throw DataError(msg.str());
    }
}

std::string file_stem(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = name.find_last_of('.');
    return dot == std::string::npos ? name : name.substr(0, dot);
}

} // namespace

void validate_series(const RawSeries& series) {
    for (std::size_t i = 0; i < series.records.size(); ++i) {
        const DailyRecord& rec = series.records[i];
        check_record(rec, i + 2); // +2: header line plus 1-based count
        if (i > 0 && !(series.records[i - 1].date < rec.date)) {
            throw DataError("dates not strictly increasing at " + rec.date.to_iso());
        }
    }
}

RawSeries load_csv(const std::string& path, const std::string& city) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open data file '" + path + "'");
    }
    RawSeries series;
    series.city = city.empty() ? file_stem(path) : city;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line_no == 1) {
            if (line != kCsvHeader) {
                throw DataError("line 1: expected header '" + std::string(kCsvHeader) +
                                "', got '" + line + "'");
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        std::size_t c1 = line.find(',');
        std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos ||
            line.find(',', c2 + 1) != std::string::npos) {
            std::ostringstream msg;
            msg << "line " << line_no << ": expected 3 comma-separated fields";
            throw DataError(msg.str());
        }
        std::string date_field = line.substr(0, c1);
        std::string temp_field = line.substr(c1 + 1, c2 - c1 - 1);
        std::string hum_field = line.substr(c2 + 1);
        if (date_field.empty() || temp_field.empty() || hum_field.empty()) {
            std::ostringstream msg;
            msg << "line " << line_no << ": missing field";
            throw DataError(msg.str());
        }

        DailyRecord rec;
        try {
            rec.date = Date::parse_iso(date_field);
        } catch (const DataError& e) {
            std::ostringstream msg;
            msg << "line " << line_no << ": " << e.what();
            throw DataError(msg.str());
        }
        rec.temperature_c = parse_number(temp_field, line_no, "temperature");
        rec.humidity_pct = parse_number(hum_field, line_no, "humidity");
        check_record(rec, line_no);
        if (!series.records.empty() && !(series.records.back().date < rec.date)) {
            std::ostringstream msg;
            msg << "line " << line_no << ": date " << rec.date.to_iso()
                << " not after previous date " << series.records.back().date.to_iso();
            throw DataError(msg.str());
        }
        series.records.push_back(rec);
    }
    return series;
}

void write_csv(const RawSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write data file '" + path + "'");
    }
    out << kCsvHeader << "\n";
    char buf[80];
    for (const DailyRecord& rec : series.records) {
        auto fmt = [&buf](double v) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
            (void)ec;
            return std::string(buf, ptr);
        };
        out << rec.date.to_iso() << "," << fmt(rec.temperature_c) << "," << fmt(rec.humidity_pct)
            << "\n";
    }
    if (!out) {
        throw DataError("write failed for '" + path + "'");
    }
}

std::pair<RawSeries, RawSeries> chronological_split(const RawSeries& series,
                                                    const SplitDates& dates) {
    RawSeries train{series.city, {}};
    RawSeries test{series.city, {}};
    for (const DailyRecord& rec : series.records) {
        if (rec.date < dates.train_start || dates.test_end < rec.date) {
            continue;
        }
        if (rec.date <= dates.train_end) {
            train.records.push_back(rec);
        } else {
            test.records.push_back(rec);
        }
    }
    if (train.records.empty()) {
        throw DataError("series '" + series.city + "' has no records in the training period " +
                        dates.train_start.to_iso() + ".." + dates.train_end.to_iso());
    }
    if (test.records.empty()) {
        throw DataError("series '" + series.city + "' has no records in the test period after " +
                        dates.train_end.to_iso());
    }
    return {std::move(train), std::move(test)};
}

std::vector<RawSeries> seasonal_runs(const RawSeries& series, Season season) {
    std::vector<RawSeries> runs;
    const DailyRecord* prev = nullptr;
    for (const DailyRecord& rec : series.records) {
        if (season_of_month(rec.date.month) != season) {
            prev = nullptr;
            continue;
        }
        bool contiguous = prev != nullptr && rec.date.serial() == prev->date.serial() + 1;
        if (!contiguous) {
            runs.push_back(RawSeries{series.city, {}});
        }
        runs.back().records.push_back(rec);
        prev = &rec;
    }
    return runs;
}

RawSeries generate_synthetic(std::uint64_t seed, int years, const SyntheticProfile& profile,
                             const std::string& city, Date start) {
    if (years < 1) {
        throw DataError("generate_synthetic: years must be >= 1");
    }
    // End of the last 12-month block: same day-of-month `years` years on.
    Date end_exclusive{start.year + years, start.month, start.day};
    std::int64_t n_days = end_exclusive.serial() - start.serial();

    SeededRng rng(seed);
    RawSeries series;
    series.city = city;
    series.records.reserve(static_cast<std::size_t>(n_days));

    double t_noise = 0.0;
    double h_noise = 0.0;
    for (std::int64_t k = 0; k < n_days; ++k) {
        Date date = start.plus_days(k);
        double phase = 2.0 * M_PI * (date.day_of_year() - profile.t_peak_doy) / 365.25;
        double sr = std::cos(phase); // +1 at the warmest day, -1 at the coldest

        double t_sd = profile.t_noise_sd * (1.0 - profile.t_noise_seasonal * sr);
        t_noise = profile.t_noise_phi * t_noise + t_sd * rng.gaussian();
        double temperature = profile.t_mean + profile.t_amplitude * sr + t_noise;

        double h_sd = profile.h_noise_sd * (1.0 - profile.h_noise_seasonal * sr);
        h_noise = profile.h_noise_phi * h_noise + h_sd * rng.gaussian();
        double humidity = profile.h_base - profile.h_amplitude * sr + h_noise;

        DailyRecord rec;
        rec.date = date;
        rec.temperature_c = std::clamp(temperature, kTempMin, kTempMax);
        rec.humidity_pct = std::clamp(humidity, 0.0, 100.0);
        series.records.push_back(rec);
    }
    return series;
}

} // namespace skycast
