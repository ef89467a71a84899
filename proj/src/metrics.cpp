#include "skycast/metrics.hpp"

#include <cmath>
#include <sstream>

#include "skycast/errors.hpp"

namespace skycast {

namespace {

void check_input(const Vector& actual, const Vector& predicted) {
    if (actual.empty()) throw DataError("metric input is empty");
    if (actual.size() != predicted.size()) {
        throw DataError("metric inputs differ in length: " + std::to_string(actual.size()) +
                        " actual vs " + std::to_string(predicted.size()) + " predicted");
    }
    if (!all_finite(actual) || !all_finite(predicted)) {
        throw DataError("metric input contains non-finite values");
    }
}

} // namespace

double rmse(const Vector& actual, const Vector& predicted) {
    check_input(actual, predicted);
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        double e = actual[i] - predicted[i];
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(actual.size()));
}

double mape(const Vector& actual, const Vector& predicted, double offset) {
    check_input(actual, predicted);
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (std::abs(actual[i] + offset) <= 1e-9) bad.push_back(i);
    }
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "mape denominator is near zero at indices";
        for (std::size_t i : bad) msg << ' ' << i;
        throw DataError(msg.str());
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        sum += std::abs((actual[i] - predicted[i]) / (actual[i] + offset));
    }
    return 100.0 * sum / static_cast<double>(actual.size());
}

double mae(const Vector& actual, const Vector& predicted) {
    check_input(actual, predicted);
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        sum += std::abs(actual[i] - predicted[i]);
    }
    return sum / static_cast<double>(actual.size());
}

double theils_u(const Vector& actual, const Vector& predicted, double offset) {
    check_input(actual, predicted);
    const double n = static_cast<double>(actual.size());
    double err_sq = 0.0, act_sq = 0.0, pred_sq = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        double e = actual[i] - predicted[i];
        err_sq += e * e;
        act_sq += (actual[i] + offset) * (actual[i] + offset);
        pred_sq += (predicted[i] + offset) * (predicted[i] + offset);
    }
    double denom = std::sqrt(act_sq / n) + std::sqrt(pred_sq / n);
    if (denom <= 0.0) {
        throw DataError("theils_u denominator is zero (all values equal the negated offset)");
    }
    return std::sqrt(err_sq / n) / denom;
}

MetricReport evaluate(const std::function<double(const Vector&)>& predict_fn,
                      const SampleSet& test, double offset) {
    if (test.size() == 0) throw DataError("evaluate: empty test set");
    double lo = test.norm.target_lo(test.spec.target);
    double hi = test.norm.target_hi(test.spec.target);
    Vector predicted(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        predicted[i] = denormalize(predict_fn(test.input_row(i)), lo, hi);
    }
    if (!all_finite(predicted)) throw DataError("evaluate: non-finite prediction");
    MetricReport report;
    report.rmse = rmse(test.raw_targets, predicted);
    report.mape = mape(test.raw_targets, predicted, offset);
    report.mae = mae(test.raw_targets, predicted);
    report.theils_u = theils_u(test.raw_targets, predicted, offset);
    report.ratio_offset = offset;
    return report;
}

MetricReport evaluate(const ModelParams& params, const SampleSet& test) {
    return evaluate([&](const Vector& x) { return predict(params, x); }, test,
                    ratio_offset_for(test.spec.target));
}

} // namespace skycast
