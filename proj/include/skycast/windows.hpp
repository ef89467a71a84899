#pragma once

#include <vector>

#include "skycast/linalg.hpp"
#include "skycast/series.hpp"

namespace skycast {

enum class TargetKind { Temperature, Humidity };

// The four experiment configurations: testings 1 and 2 use two lagged days
// (four input nodes), testings 3 and 4 use three (six input nodes); odd
// testings predict next-day temperature, even ones next-day humidity.
struct WindowSpec {
    int testing_id = 3;
    int lag_count = 3;
    TargetKind target = TargetKind::Temperature;

    static WindowSpec for_testing(int testing_id);
    int input_width() const { return 2 * lag_count; }

    bool operator==(const WindowSpec&) const = default;
};

// (x - lo) / (hi - lo). Throws DataError when lo >= hi.
double minmax_normalize(double x, double lo, double hi);
// Inverse mapping u*(hi - lo) + lo.
double denormalize(double u, double lo, double hi);

// Min-max extrema for both variables, fitted over the training slice only.
struct NormalizationParams {
    double t_min = 0.0;
    double t_max = 1.0;
    double h_min = 0.0;
    double h_max = 1.0;

    static NormalizationParams fit(const std::vector<RawSeries>& segments);

    double normalize_t(double t) const { return minmax_normalize(t, t_min, t_max); }
    double normalize_h(double h) const { return minmax_normalize(h, h_min, h_max); }
    double denorm_t(double u) const { return denormalize(u, t_min, t_max); }
    double denorm_h(double u) const { return denormalize(u, h_min, h_max); }

    double target_lo(TargetKind k) const { return k == TargetKind::Temperature ? t_min : h_min; }
    double target_hi(TargetKind k) const { return k == TargetKind::Temperature ? t_max : h_max; }

    bool operator==(const NormalizationParams&) const = default;
};

// Normalized lag-window inputs with targets. Row layout: lagged temperatures
// oldest-first, then lagged humidities oldest-first. raw_targets keeps the
// target in original units.
struct SampleSet {
    Matrix inputs;
    Vector targets;
    Vector raw_targets;
    WindowSpec spec;
    NormalizationParams norm;

    std::size_t size() const { return targets.size(); }
    Vector input_row(std::size_t i) const { return inputs.row(i); }
};

// One sample per window position that has lag_count prior days and one
// following day inside a contiguous segment; windows never span segment
// boundaries. A segment of length m contributes max(0, m - lag_count)
// samples.
SampleSet build_windows(const std::vector<RawSeries>& segments, const WindowSpec& spec,
                        const NormalizationParams& norm);

} // namespace skycast
