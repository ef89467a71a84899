#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "skycast/dates.hpp"

namespace skycast {

struct DailyRecord {
    Date date;
    double temperature_c = 0.0;
    double humidity_pct = 0.0;

    bool operator==(const DailyRecord&) const = default;
};

// Dated daily observations for one city. Dates are strictly increasing,
// humidity lies in [0, 100] and temperature in [-60, 60]; every constructor
// path validates this.
struct RawSeries {
    std::string city;
    std::vector<DailyRecord> records;

    bool operator==(const RawSeries&) const = default;
};

// Throws DataError (with the offending value) if any invariant fails.
void validate_series(const RawSeries& series);

// CSV format: header "date,temperature_c,humidity_pct", ISO-8601 dates, one
// row per day. Malformed rows are reported with their line number.
RawSeries load_csv(const std::string& path, const std::string& city = "");
void write_csv(const RawSeries& series, const std::string& path);

// Train/test boundary dates. Train covers [train_start, train_end], test
// covers (train_end, test_end]; records outside [train_start, test_end] are
// excluded from both partitions.
struct SplitDates {
    Date train_start{2014, 3, 1};
    Date train_end{2019, 2, 28};
    Date test_end{2020, 2, 29};

    bool operator==(const SplitDates&) const = default;
};

// Throws DataError when either partition would be empty.
std::pair<RawSeries, RawSeries> chronological_split(const RawSeries& series,
                                                    const SplitDates& dates = {});

// Maximal runs of consecutive days (no date gaps) whose months all belong to
// the season. Winter runs continue across the calendar-year boundary.
std::vector<RawSeries> seasonal_runs(const RawSeries& series, Season season);

// Daily temperature: annual sinusoid plus AR(1) noise whose innovation scale
// shrinks in summer and grows in winter. Humidity: base level plus a sinusoid
// in anti-phase with temperature plus AR(1) noise, clamped to [0, 100].
struct SyntheticProfile {
    double t_mean = 12.0;
    double t_amplitude = 11.0;
    int t_peak_doy = 205; // warmest day of year
    double t_noise_sd = 1.7;
    double t_noise_phi = 0.35;
    double t_noise_seasonal = 0.45; // innovation scale swing, 0..1
    double h_base = 68.0;
    double h_amplitude = 12.0;
    double h_noise_sd = 5.0;
    double h_noise_phi = 0.3;
    double h_noise_seasonal = 0.3;
};

// Deterministic in (seed, years, profile). Emits years*12 months of daily
// records starting at start date (default 2014-03-01, so years=6 spans
// 2014-03-01..2020-02-29, matching the default split window).
RawSeries generate_synthetic(std::uint64_t seed, int years,
                             const SyntheticProfile& profile = {},
                             const std::string& city = "synthville",
                             Date start = Date{2014, 3, 1});

} // namespace skycast
