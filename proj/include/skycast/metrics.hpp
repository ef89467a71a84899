#pragma once

#include <functional>

#include "skycast/models.hpp"
#include "skycast/windows.hpp"

namespace skycast {

// Offset added inside the ratio-metric denominators (mape, theils_u) only.
// Temperature uses a Kelvin-like shift so near-zero Celsius values cannot
// blow up the ratios; humidity percentages need none.
inline constexpr double kKelvinOffset = 273.15;

inline double ratio_offset_for(TargetKind kind) {
    return kind == TargetKind::Temperature ? kKelvinOffset : 0.0;
}

double rmse(const Vector& actual, const Vector& predicted);
double mape(const Vector& actual, const Vector& predicted, double offset = 0.0);
double mae(const Vector& actual, const Vector& predicted);
double theils_u(const Vector& actual, const Vector& predicted, double offset = 0.0);

struct MetricReport {
    double rmse = 0.0;
    double mape = 0.0; // percent
    double mae = 0.0;
    double theils_u = 0.0;
    double ratio_offset = 0.0;

    bool operator==(const MetricReport&) const = default;
};

// Runs predict_fn on every normalized test window, denormalizes the
// predictions, and computes all four metrics against the raw targets.
MetricReport evaluate(const std::function<double(const Vector&)>& predict_fn,
                      const SampleSet& test, double offset);
// Same, with the offset chosen by the sample set's target kind.
MetricReport evaluate(const ModelParams& params, const SampleSet& test);

} // namespace skycast
