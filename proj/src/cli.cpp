#include "skycast/cli.hpp"

#include <CLI11.hpp>
#include <iostream>

#include "skycast/config.hpp"
#include "skycast/errors.hpp"
#include "skycast/experiment.hpp"
#include "skycast/model_io.hpp"
#include "skycast/report.hpp"
#include "skycast/training.hpp"

namespace skycast {

namespace {

struct CliArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double epoch_scale = 1.0;
    bool epoch_scale_set = false;
    unsigned jobs = 1;
    std::string out;

    // synth
    int years = 7;
    std::string city = "synthville";

    // validate
    std::string validate_path;

    // train
    std::string train_data;
    std::string train_season = "summer";
    int train_testing = 3;
    std::string train_model = "lstm";
    double train_lr = 0.0;
    bool train_lr_set = false;
    long long train_epochs = 2500;

    // grid
    std::vector<std::string> grid_data;

    // report
    std::string manifest_path;
};

HarnessConfig resolve_config(const CliArgs& args) {
    HarnessConfig config;
    if (!args.config_path.empty()) config = HarnessConfig::load(args.config_path);
    if (args.seed_set) config.base_seed = args.seed;
    if (args.epoch_scale_set) config.epoch_scale = args.epoch_scale;
    config.validate();
    return config;
}

int cmd_synth(const CliArgs& args) {
    std::string out = args.out.empty() ? "synthetic.csv" : args.out;
    std::uint64_t seed = args.seed_set ? args.seed : 1;
    RawSeries series = generate_synthetic(seed, args.years, SyntheticProfile{}, args.city);
    write_csv(series, out);
    std::cout << "wrote " << series.records.size() << " days for " << series.city << " ("
              << series.records.front().date.to_iso() << ".."
              << series.records.back().date.to_iso() << ") to " << out << '\n';
    return 0;
}

int cmd_validate(const CliArgs& args) {
    RawSeries series = load_csv(args.validate_path);
    std::cout << args.validate_path << ": ok; city " << series.city << ", "
              << series.records.size() << " days ("
              << series.records.front().date.to_iso() << ".."
              << series.records.back().date.to_iso() << ")\n";
    return 0;
}

int cmd_train(const CliArgs& args) {
    HarnessConfig config = resolve_config(args);
    RawSeries data = load_csv(args.train_data);

    ExperimentSpec spec;
    spec.city = data.city;
    spec.season = parse_season(args.train_season);
    spec.testing_id = args.train_testing;
    spec.model = parse_model_kind(args.train_model);
    spec.base_seed = config.base_seed;
    if (spec.model != ModelKind::ELM) {
        spec.learning_rate = args.train_lr_set
                                 ? args.train_lr
                                 : (is_recurrent(spec.model) ? config.rnn_learning_rates.front()
                                                             : config.ff_learning_rates.front());
        spec.epochs = args.train_epochs;
    }

    SeasonSlices slices =
        make_season_slices(data, spec.season, spec.testing_id, config.split);
    ModelParams params = [&]() -> ModelParams {
        if (spec.model == ModelKind::ELM) {
            return fit_elm_ensemble(slices.train, config.elm_hidden, spec.cell_seed());
        }
        TrainConfig tc{spec.learning_rate, spec.epochs, spec.cell_seed(), config.epoch_scale};
        return train_iterative(spec.model, slices.train, tc, config.lstm_hidden).first;
    }();

    MetricReport metrics = evaluate([&](const Vector& x) { return predict(params, x); },
                                    slices.test, config.offset_for(slices.test.spec.target));
    std::cout << spec.canonical_string() << '\n';
    std::cout << "train_windows " << slices.train.size() << " test_windows "
              << slices.test.size() << '\n';
    std::cout << "rmse " << format_double(metrics.rmse) << '\n';
    std::cout << "mape " << format_double(metrics.mape) << '\n';
    std::cout << "mae " << format_double(metrics.mae) << '\n';
    std::cout << "theils_u " << format_double(metrics.theils_u) << '\n';

    if (!args.out.empty()) {
        save_model({params, slices.train.spec, slices.train.norm}, args.out);
        std::cout << "saved model to " << args.out << '\n';
    }
    return 0;
}

int cmd_grid(const CliArgs& args) {
    HarnessConfig config = resolve_config(args);
    std::string out_dir = args.out.empty() ? "reports" : args.out;

    std::map<std::string, RawSeries> data_by_city;
    ManifestInfo info;
    for (const std::string& path : args.grid_data) {
        RawSeries series = load_csv(path);
        if (data_by_city.count(series.city)) {
            throw DataError("duplicate city '" + series.city + "' in the data list");
        }
        info.data_digests[series.city] = file_digest(path);
        data_by_city[series.city] = std::move(series);
    }

    std::vector<std::string> cities;
    for (const auto& [city, series] : data_by_city) cities.push_back(city);

    std::vector<ExperimentSpec> cells = enumerate_cells(config, cities);
    GridResult result = run_grid(cells, data_by_city, config, args.jobs);

    info.config_digest = config.digest();
    info.base_seed = config.base_seed;
    info.epoch_scale = config.epoch_scale;
    info.timestamp = utc_timestamp();

    std::vector<std::string> paths = emit_reports(result, info, out_dir);
    std::cout << cells.size() << " cells: " << result.rows.size() << " completed, "
              << result.failures.size() << " failed\n";
    for (const std::string& path : paths) std::cout << "wrote " << path << '\n';
    return 0;
}

int cmd_report(const CliArgs& args) {
    std::string out_dir = args.out.empty() ? "reports" : args.out;
    auto [result, info] = load_manifest(args.manifest_path);
    std::vector<std::string> paths = emit_reports(result, info, out_dir);
    for (const std::string& path : paths) std::cout << "wrote " << path << '\n';
    return 0;
}

} // namespace

int cli_main(int argc, char** argv) {
    CliArgs args;
    CLI::App app{"daily temperature/humidity forecasting benchmark"};
    app.require_subcommand(1);
    app.add_option("--config", args.config_path, "JSON config file");
    CLI::Option* seed_opt = app.add_option("--seed", args.seed, "base RNG seed");
    CLI::Option* scale_opt =
        app.add_option("--epoch-scale", args.epoch_scale, "scale factor for the epoch grid");
    app.add_option("--jobs", args.jobs, "worker threads for grid runs")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", args.out, "output file (synth, train) or directory (grid, report)");

    CLI::App* synth = app.add_subcommand("synth", "write a synthetic data CSV");
    synth->add_option("--years", args.years, "number of 12-month blocks to generate")
        ->check(CLI::PositiveNumber);
    synth->add_option("--city", args.city, "city name to embed in the series");

    CLI::App* validate = app.add_subcommand("validate", "check a data CSV");
    validate->add_option("path", args.validate_path, "CSV file to check")->required();

    CLI::App* train = app.add_subcommand("train", "train and evaluate a single model");
    train->add_option("--data", args.train_data, "data CSV")->required();
    train->add_option("--season", args.train_season, "spring|summer|autumn|winter");
    train->add_option("--testing", args.train_testing, "testing id 1..4")
        ->check(CLI::Range(1, 4));
    train->add_option("--model", args.train_model, "ann|dnn|elm|lstm|lstm_pc");
    CLI::Option* lr_opt = train->add_option("--lr", args.train_lr, "learning rate");
    train->add_option("--epochs", args.train_epochs, "epoch count before scaling");

    CLI::App* grid = app.add_subcommand("grid", "run the full experiment grid");
    grid->add_option("--data", args.grid_data, "data CSV (repeatable, one per city)")
        ->required();

    CLI::App* report = app.add_subcommand("report", "re-emit report files from a manifest");
    report->add_option("--manifest", args.manifest_path, "manifest.json from a grid run")
        ->required();

    for (CLI::App* sub : {synth, validate, train, grid, report}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    args.seed_set = seed_opt->count() > 0;
    args.epoch_scale_set = scale_opt->count() > 0;
    args.train_lr_set = lr_opt->count() > 0;

    try {
        if (app.got_subcommand(synth)) return cmd_synth(args);
        if (app.got_subcommand(validate)) return cmd_validate(args);
        if (app.got_subcommand(train)) return cmd_train(args);
        if (app.got_subcommand(grid)) return cmd_grid(args);
        if (app.got_subcommand(report)) return cmd_report(args);
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << '\n';
        return 3;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace skycast
