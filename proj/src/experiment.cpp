#include "skycast/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>
#include <tuple>

#include "skycast/errors.hpp"
#include "skycast/rng.hpp"
#include "skycast/training.hpp"
#include "skycast/windows.hpp"

namespace skycast {

std::string ExperimentSpec::canonical_string() const {
    std::string s = "city=" + city + "|season=" + season_name(season) +
                    "|testing=" + std::to_string(testing_id) + "|model=" +
                    model_kind_name(model);
    if (model != ModelKind::ELM) {
        s += "|lr=" + format_double(learning_rate) + "|epochs=" + std::to_string(epochs);
    }
    return s;
}

std::uint64_t ExperimentSpec::cell_seed() const {
    return mix_seeds(base_seed, fnv1a64(canonical_string()));
}

bool spec_less(const ExperimentSpec& a, const ExperimentSpec& b) {
    return std::tie(a.city, a.season, a.testing_id, a.model, a.learning_rate, a.epochs) <
           std::tie(b.city, b.season, b.testing_id, b.model, b.learning_rate, b.epochs);
}

std::vector<ExperimentSpec> enumerate_cells(const HarnessConfig& config,
                                            const std::vector<std::string>& cities) {
    config.validate();
    std::vector<std::string> sorted_cities = cities;
    std::sort(sorted_cities.begin(), sorted_cities.end());

    std::vector<ExperimentSpec> cells;
    for (const std::string& city : sorted_cities) {
        for (Season season : kAllSeasons) {
            for (int testing : config.testings) {
                for (ModelKind model : config.models) {
                    ExperimentSpec spec;
                    spec.city = city;
                    spec.season = season;
                    spec.testing_id = testing;
                    spec.model = model;
                    spec.base_seed = config.base_seed;
                    if (model == ModelKind::ELM) {
                        cells.push_back(spec);
                        continue;
                    }
                    const std::vector<double>& lrs = is_recurrent(model)
                                                         ? config.rnn_learning_rates
                                                         : config.ff_learning_rates;
                    for (double lr : lrs) {
                        for (long long epochs : config.epoch_grid) {
                            spec.learning_rate = lr;
                            spec.epochs = epochs;
                            cells.push_back(spec);
                        }
                    }
                }
            }
        }
    }
    return cells;
}

SeasonSlices make_season_slices(const RawSeries& data, Season season, int testing_id,
                                const SplitDates& split) {
    auto [train, test] = chronological_split(data, split);
    std::vector<RawSeries> train_runs = seasonal_runs(train, season);
    std::vector<RawSeries> test_runs = seasonal_runs(test, season);
    if (train_runs.empty()) {
        throw DataError(std::string("no ") + season_name(season) + " days in the training period");
    }
    if (test_runs.empty()) {
        throw DataError(std::string("no ") + season_name(season) + " days in the test period");
    }
    WindowSpec wspec = WindowSpec::for_testing(testing_id);
    NormalizationParams norm = NormalizationParams::fit(train_runs);
    SeasonSlices slices;
    slices.train = build_windows(train_runs, wspec, norm);
    slices.test = build_windows(test_runs, wspec, norm);
    return slices;
}

ResultRow run_experiment(const ExperimentSpec& spec, const RawSeries& data,
                         const HarnessConfig& config) {
    auto t0 = std::chrono::steady_clock::now();
    SeasonSlices slices = make_season_slices(data, spec.season, spec.testing_id, config.split);
    WindowSpec wspec = slices.train.spec;

    std::size_t min_train = static_cast<std::size_t>(wspec.lag_count) + 2;
    if (slices.train.size() < min_train) {
        throw DataError("only " + std::to_string(slices.train.size()) +
                        " training windows for " + spec.canonical_string() + "; need at least " +
                        std::to_string(min_train));
    }
    if (slices.test.size() == 0) {
        throw DataError("no test windows for " + spec.canonical_string());
    }

    ModelParams params = [&]() -> ModelParams {
        if (spec.model == ModelKind::ELM) {
            return fit_elm_ensemble(slices.train, config.elm_hidden, spec.cell_seed());
        }
        TrainConfig tc{spec.learning_rate, spec.epochs, spec.cell_seed(), config.epoch_scale};
        return train_iterative(spec.model, slices.train, tc, config.lstm_hidden).first;
    }();

    ResultRow row;
    row.spec = spec;
    row.metrics = evaluate([&](const Vector& x) { return predict(params, x); }, slices.test,
                           config.offset_for(wspec.target));

    double loss_sum = 0.0;
    for (std::size_t j = 0; j < slices.train.size(); ++j) {
        loss_sum += mse_loss(predict(params, slices.train.input_row(j)),
                             slices.train.targets[j]);
    }
    row.final_train_loss = loss_sum / static_cast<double>(slices.train.size());

    row.train_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

GridResult run_grid(const std::vector<ExperimentSpec>& cells,
                    const std::map<std::string, RawSeries>& data_by_city,
                    const HarnessConfig& config, unsigned jobs) {
    if (jobs == 0) jobs = 1;

    struct Slot {
        std::optional<ResultRow> row;
        std::optional<FailedCell> failure;
    };
    std::vector<Slot> slots(cells.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            std::size_t idx = next.fetch_add(1);
            if (idx >= cells.size()) return;
            const ExperimentSpec& spec = cells[idx];
            try {
                auto it = data_by_city.find(spec.city);
                if (it == data_by_city.end()) {
                    throw DataError("no data series for city '" + spec.city + "'");
                }
                slots[idx].row = run_experiment(spec, it->second, config);
            } catch (const DivergenceError& e) {
                slots[idx].failure = FailedCell{spec, "divergence", e.what()};
            } catch (const DataError& e) {
                slots[idx].failure = FailedCell{spec, "data_error", e.what()};
            } catch (const std::exception& e) {
                slots[idx].failure = FailedCell{spec, "error", e.what()};
            }
        }
    };

    std::size_t thread_count =
        std::min<std::size_t>(jobs, std::max<std::size_t>(cells.size(), 1));
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    GridResult result;
    for (Slot& slot : slots) {
        if (slot.row) result.rows.push_back(std::move(*slot.row));
        else if (slot.failure) result.failures.push_back(std::move(*slot.failure));
    }
    return result;
}

double metric_value(const MetricReport& metrics, const std::string& metric_name) {
    if (metric_name == "rmse") return metrics.rmse;
    if (metric_name == "mape") return metrics.mape;
    if (metric_name == "mae") return metrics.mae;
    if (metric_name == "theils_u") return metrics.theils_u;
    throw DataError("unknown metric '" + metric_name + "'");
}

std::vector<BestCell> best_per_cell(const std::vector<ResultRow>& rows,
                                    const std::string& metric_name) {
    // prefer: smaller value, then model order, lower lr, fewer epochs; the
    // canonical string is a last-resort total tie-break
    auto better = [&](const ResultRow& a, const ResultRow& b) {
        double va = metric_value(a.metrics, metric_name);
        double vb = metric_value(b.metrics, metric_name);
        if (va != vb) return va < vb;
        if (a.spec.model != b.spec.model) return a.spec.model < b.spec.model;
        if (a.spec.learning_rate != b.spec.learning_rate) {
            return a.spec.learning_rate < b.spec.learning_rate;
        }
        if (a.spec.epochs != b.spec.epochs) return a.spec.epochs < b.spec.epochs;
        return a.spec.canonical_string() < b.spec.canonical_string();
    };

    std::map<std::pair<std::string, Season>, const ResultRow*> best;
    for (const ResultRow& row : rows) {
        auto key = std::make_pair(row.spec.city, row.spec.season);
        auto [it, inserted] = best.try_emplace(key, &row);
        if (!inserted && better(row, *it->second)) it->second = &row;
    }

    std::vector<BestCell> out;
    for (const auto& [key, row] : best) {
        out.push_back({key.first, key.second, metric_value(row->metrics, metric_name),
                       row->spec});
    }
    // map order is (city asc, season enum asc) already
    return out;
}

MetricReport persistence_baseline(const SampleSet& test, double offset) {
    std::size_t lags = static_cast<std::size_t>(test.spec.lag_count);
    std::size_t col = test.spec.target == TargetKind::Temperature ? lags - 1 : 2 * lags - 1;
    return evaluate([col](const Vector& x) { return x[col]; }, test, offset);
}

} // namespace skycast
