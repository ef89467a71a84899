#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skycast/config.hpp"
#include "skycast/metrics.hpp"
#include "skycast/models.hpp"
#include "skycast/series.hpp"

namespace skycast {

// One grid cell. learning_rate and epochs are 0 for ELM, which has neither.
struct ExperimentSpec {
    std::string city;
    Season season = Season::Spring;
    int testing_id = 3;
    ModelKind model = ModelKind::ANN;
    double learning_rate = 0.0;
    long long epochs = 0;
    std::uint64_t base_seed = 1;

    bool operator==(const ExperimentSpec&) const = default;

    // Stable identity string (excludes base_seed); doubles rendered with
    // shortest round-trip formatting.
    std::string canonical_string() const;
    // mix_seeds(base_seed, fnv1a64(canonical_string()))
    std::uint64_t cell_seed() const;
};

// Deterministic total order: city, season, testing, model, lr, epochs.
bool spec_less(const ExperimentSpec& a, const ExperimentSpec& b);

struct ResultRow {
    ExperimentSpec spec;
    MetricReport metrics;
    double final_train_loss = 0.0; // training-set MSE of the final params
    double train_seconds = 0.0;    // wall clock; excluded from determinism

    bool operator==(const ResultRow&) const = default;
};

struct FailedCell {
    ExperimentSpec spec;
    std::string error_kind; // "data_error" | "divergence" | "error"
    std::string message;

    bool operator==(const FailedCell&) const = default;
};

struct GridResult {
    std::vector<ResultRow> rows;         // spec order
    std::vector<FailedCell> failures;    // spec order
};

// Cartesian product for the given cities in lexicographic spec order:
// ANN/DNN x ff lrs x epochs, ELM alone, LSTM/LSTM_PC x rnn lrs x epochs.
std::vector<ExperimentSpec> enumerate_cells(const HarnessConfig& config,
                                            const std::vector<std::string>& cities);

// Full pipeline for one cell: split, seasonal slicing, normalization fitted on
// the training slice, windowing, training, evaluation on the test windows.
ResultRow run_experiment(const ExperimentSpec& spec, const RawSeries& data,
                         const HarnessConfig& config);

// Runs cells concurrently (up to jobs threads); results land in spec order
// regardless of scheduling. DataError / DivergenceError become FailedCells.
GridResult run_grid(const std::vector<ExperimentSpec>& cells,
                    const std::map<std::string, RawSeries>& data_by_city,
                    const HarnessConfig& config, unsigned jobs);

struct BestCell {
    std::string city;
    Season season = Season::Spring;
    double value = 0.0;
    ExperimentSpec winner;

    bool operator==(const BestCell&) const = default;
};

double metric_value(const MetricReport& metrics, const std::string& metric_name);

// Minimum of the named metric per (city, season); ties prefer the earlier
// model kind, then lower lr, then fewer epochs.
std::vector<BestCell> best_per_cell(const std::vector<ResultRow>& rows,
                                    const std::string& metric_name);

// "Tomorrow equals today": the most recent lagged value of the target
// variable is the prediction. Serves as the skill floor every model must beat.
MetricReport persistence_baseline(const SampleSet& test, double offset);

// Windowed train/test sets for one (city, season, testing) slice.
struct SeasonSlices {
    SampleSet train;
    SampleSet test;
};

SeasonSlices make_season_slices(const RawSeries& data, Season season, int testing_id,
                                const SplitDates& split);

} // namespace skycast
