#include "skycast/windows.hpp"

#include <algorithm>
#include <sstream>

#include "skycast/errors.hpp"

namespace skycast {

WindowSpec WindowSpec::for_testing(int testing_id) {
    if (testing_id < 1 || testing_id > 4) {
        std::ostringstream msg;
        msg << "testing id must be 1..4, got " << testing_id;
        throw DataError(msg.str());
    }
    WindowSpec spec;
    spec.testing_id = testing_id;
    spec.lag_count = testing_id <= 2 ? 2 : 3;
    spec.target = testing_id % 2 == 1 ? TargetKind::Temperature : TargetKind::Humidity;
    return spec;
}

double minmax_normalize(double x, double lo, double hi) {
    if (!(lo < hi)) {
        std::ostringstream msg;
        msg << "degenerate normalization range [" << lo << ", " << hi << "]";
        throw DataError(msg.str());
    }
    return (x - lo) / (hi - lo);
}

double denormalize(double u, double lo, double hi) {
    if (!(lo < hi)) {
        std::ostringstream msg;
        msg << "degenerate normalization range [" << lo << ", " << hi << "]";
        throw DataError(msg.str());
    }
    return u * (hi - lo) + lo;
}

NormalizationParams NormalizationParams::fit(const std::vector<RawSeries>& segments) {
    bool seen = false;
    NormalizationParams p;
    for (const RawSeries& seg : segments) {
        for (const DailyRecord& rec : seg.records) {
            if (!seen) {
                p.t_min = p.t_max = rec.temperature_c;
                p.h_min = p.h_max = rec.humidity_pct;
                seen = true;
            } else {
                p.t_min = std::min(p.t_min, rec.temperature_c);
                p.t_max = std::max(p.t_max, rec.temperature_c);
                p.h_min = std::min(p.h_min, rec.humidity_pct);
                p.h_max = std::max(p.h_max, rec.humidity_pct);
            }
        }
    }
    if (!seen) {
        throw DataError("cannot fit normalization on empty segments");
    }
    if (!(p.t_min < p.t_max) || !(p.h_min < p.h_max)) {
        throw DataError("normalization range is degenerate (constant series)");
    }
    return p;
}

SampleSet build_windows(const std::vector<RawSeries>& segments, const WindowSpec& spec,
                        const NormalizationParams& norm) {
    const int lags = spec.lag_count;
    std::size_t count = 0;
    for (const RawSeries& seg : segments) {
        if (seg.records.size() > static_cast<std::size_t>(lags)) {
            count += seg.records.size() - static_cast<std::size_t>(lags);
        }
    }

    SampleSet set;
    set.spec = spec;
    set.norm = norm;
    set.targets.reserve(count);
    set.raw_targets.reserve(count);
    if (count == 0) {
        set.inputs = Matrix();
        return set;
    }
    set.inputs = Matrix(count, static_cast<std::size_t>(spec.input_width()));

    std::size_t row = 0;
    for (const RawSeries& seg : segments) {
        const auto& recs = seg.records;
        if (recs.size() <= static_cast<std::size_t>(lags)) {
            continue;
        }
        // "today" index t needs lags-1 prior days and one following day
        for (std::size_t t = static_cast<std::size_t>(lags) - 1; t + 1 < recs.size(); ++t) {
            for (int k = 0; k < lags; ++k) {
                const DailyRecord& rec = recs[t - static_cast<std::size_t>(lags - 1 - k)];
                set.inputs(row, static_cast<std::size_t>(k)) = norm.normalize_t(rec.temperature_c);
                set.inputs(row, static_cast<std::size_t>(lags + k)) =
                    norm.normalize_h(rec.humidity_pct);
            }
            const DailyRecord& next = recs[t + 1];
            double raw = spec.target == TargetKind::Temperature ? next.temperature_c
                                                                : next.humidity_pct;
            double normed = spec.target == TargetKind::Temperature ? norm.normalize_t(raw)
                                                                   : norm.normalize_h(raw);
            set.targets.push_back(normed);
            set.raw_targets.push_back(raw);
            ++row;
        }
    }
    return set;
}

} // namespace skycast
