#include "skycast/report.hpp"

#include <charconv>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "skycast/errors.hpp"

namespace skycast {

using nlohmann::json;

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

namespace {

constexpr const char* kGridHeader =
    "city,season,testing,model,lr,epochs,seed,rmse,mape,mae,theils_u,ratio_offset,"
    "final_train_loss";

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    return out;
}

void append_spec_fields(std::string& line, const ExperimentSpec& spec) {
    line += csv_escape(spec.city);
    line += ',';
    line += season_name(spec.season);
    line += ',';
    line += std::to_string(spec.testing_id);
    line += ',';
    line += model_kind_name(spec.model);
    line += ',';
    if (spec.model != ModelKind::ELM) {
        line += format_double(spec.learning_rate);
        line += ',';
        line += std::to_string(spec.epochs);
    } else {
        line += ','; // lr and epochs stay empty
    }
    line += ',';
    line += std::to_string(spec.base_seed);
}

long long parse_int_field(const std::string& text, const char* what) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw DataError("cannot parse " + std::string(what) + " from '" + text + "'");
    }
    return value;
}

} // namespace

void write_grid_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out = open_out(path);
    out << kGridHeader << '\n';
    for (const ResultRow& row : rows) {
        std::string line;
        append_spec_fields(line, row.spec);
        line += ',';
        line += format_double(row.metrics.rmse);
        line += ',';
        line += format_double(row.metrics.mape);
        line += ',';
        line += format_double(row.metrics.mae);
        line += ',';
        line += format_double(row.metrics.theils_u);
        line += ',';
        line += format_double(row.metrics.ratio_offset);
        line += ',';
        line += format_double(row.final_train_loss);
        out << line << '\n';
    }
}

std::vector<ResultRow> parse_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kGridHeader) {
        throw DataError("'" + path + "' header mismatch; expected '" + kGridHeader + "'");
    }
    std::vector<ResultRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 13) {
            throw DataError("'" + path + "' line " + std::to_string(line_no) + ": expected 13 "
                            "fields, found " + std::to_string(f.size()));
        }
        ResultRow row;
        row.spec.city = f[0];
        row.spec.season = parse_season(f[1]);
        row.spec.testing_id = static_cast<int>(parse_int_field(f[2], "testing id"));
        row.spec.model = parse_model_kind(f[3]);
        if (row.spec.model == ModelKind::ELM) {
            if (!f[4].empty() || !f[5].empty()) {
                throw DataError("'" + path + "' line " + std::to_string(line_no) +
                                ": elm rows must leave lr and epochs empty");
            }
        } else {
            row.spec.learning_rate = parse_double_str(f[4], "learning rate");
            row.spec.epochs = parse_int_field(f[5], "epochs");
        }
        row.spec.base_seed = static_cast<std::uint64_t>(parse_int_field(f[6], "seed"));
        row.metrics.rmse = parse_double_str(f[7], "rmse");
        row.metrics.mape = parse_double_str(f[8], "mape");
        row.metrics.mae = parse_double_str(f[9], "mae");
        row.metrics.theils_u = parse_double_str(f[10], "theils_u");
        row.metrics.ratio_offset = parse_double_str(f[11], "ratio_offset");
        row.final_train_loss = parse_double_str(f[12], "final_train_loss");
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_summary_csv(const std::vector<ResultRow>& rows, const std::string& metric_name,
                       const std::string& path) {
    std::ofstream out = open_out(path);
    out << "# unit: %; note that rmse and mae keep the target's own unit (degrees C for "
           "temperature, percentage points for humidity)\n";
    out << "city,season,value,model,lr,epochs,testing\n";
    for (const BestCell& cell : best_per_cell(rows, metric_name)) {
        out << csv_escape(cell.city) << ',' << season_name(cell.season) << ','
            << format_double(cell.value) << ',' << model_kind_name(cell.winner.model) << ',';
        if (cell.winner.model != ModelKind::ELM) {
            out << format_double(cell.winner.learning_rate) << ',' << cell.winner.epochs;
        } else {
            out << ',';
        }
        out << ',' << cell.winner.testing_id << '\n';
    }
}

void write_fig_csv(const std::vector<ResultRow>& rows, const std::string& metric_name,
                   const std::string& path) {
    std::ofstream out = open_out(path);
    out << "city,spring,summer,autumn,winter\n";
    std::map<std::string, std::map<Season, double>> table;
    for (const BestCell& cell : best_per_cell(rows, metric_name)) {
        table[cell.city][cell.season] = cell.value;
    }
    for (const auto& [city, by_season] : table) {
        out << csv_escape(city);
        for (Season season : kAllSeasons) {
            out << ',';
            auto it = by_season.find(season);
            if (it != by_season.end()) out << format_double(it->second);
        }
        out << '\n';
    }
}

namespace {

json spec_to_json(const ExperimentSpec& spec) {
    json j;
    j["city"] = spec.city;
    j["season"] = season_name(spec.season);
    j["testing"] = spec.testing_id;
    j["model"] = model_kind_name(spec.model);
    if (spec.model != ModelKind::ELM) {
        j["lr"] = spec.learning_rate;
        j["epochs"] = spec.epochs;
    }
    j["seed"] = spec.base_seed;
    return j;
}

ExperimentSpec spec_from_json(const json& j) {
    ExperimentSpec spec;
    spec.city = j.at("city").get<std::string>();
    spec.season = parse_season(j.at("season").get<std::string>());
    spec.testing_id = j.at("testing").get<int>();
    spec.model = parse_model_kind(j.at("model").get<std::string>());
    if (spec.model != ModelKind::ELM) {
        spec.learning_rate = j.at("lr").get<double>();
        spec.epochs = j.at("epochs").get<long long>();
    }
    spec.base_seed = j.at("seed").get<std::uint64_t>();
    return spec;
}

} // namespace

void write_manifest(const GridResult& result, const ManifestInfo& info,
                    const std::string& path) {
    json j;
    j["config_digest"] = info.config_digest;
    j["code_version"] = info.code_version;
    j["data_digests"] = info.data_digests;
    j["base_seed"] = info.base_seed;
    j["epoch_scale"] = info.epoch_scale;
    j["timestamp"] = info.timestamp;

    json rows = json::array();
    for (const ResultRow& row : result.rows) {
        json r = spec_to_json(row.spec);
        r["rmse"] = row.metrics.rmse;
        r["mape"] = row.metrics.mape;
        r["mae"] = row.metrics.mae;
        r["theils_u"] = row.metrics.theils_u;
        r["ratio_offset"] = row.metrics.ratio_offset;
        r["final_train_loss"] = row.final_train_loss;
        r["train_seconds"] = row.train_seconds;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);

    json failures = json::array();
    for (const FailedCell& f : result.failures) {
        json r = spec_to_json(f.spec);
        r["error_kind"] = f.error_kind;
        r["message"] = f.message;
        failures.push_back(std::move(r));
    }
    j["failures"] = std::move(failures);

    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

std::pair<GridResult, ManifestInfo> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("manifest '" + path + "' is not valid JSON: " + e.what());
    }

    GridResult result;
    ManifestInfo info;
    try {
        info.config_digest = j.at("config_digest").get<std::string>();
        info.code_version = j.at("code_version").get<std::string>();
        info.data_digests = j.at("data_digests").get<std::map<std::string, std::string>>();
        info.base_seed = j.at("base_seed").get<std::uint64_t>();
        info.epoch_scale = j.at("epoch_scale").get<double>();
        info.timestamp = j.at("timestamp").get<std::string>();
        for (const json& r : j.at("rows")) {
            ResultRow row;
            row.spec = spec_from_json(r);
            row.metrics.rmse = r.at("rmse").get<double>();
            row.metrics.mape = r.at("mape").get<double>();
            row.metrics.mae = r.at("mae").get<double>();
            row.metrics.theils_u = r.at("theils_u").get<double>();
            row.metrics.ratio_offset = r.at("ratio_offset").get<double>();
            row.final_train_loss = r.at("final_train_loss").get<double>();
            row.train_seconds = r.at("train_seconds").get<double>();
            result.rows.push_back(std::move(row));
        }
        for (const json& r : j.at("failures")) {
            FailedCell f;
            f.spec = spec_from_json(r);
            f.error_kind = r.at("error_kind").get<std::string>();
            f.message = r.at("message").get<std::string>();
            result.failures.push_back(std::move(f));
        }
    } catch (const json::exception& e) {
        throw DataError("manifest '" + path + "' is missing fields: " + e.what());
    }
    return {std::move(result), std::move(info)};
}

std::vector<std::string> emit_reports(const GridResult& result, const ManifestInfo& info,
                                      const std::string& out_dir) {
    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory '" + out_dir + "': " + ec.message());

    std::vector<std::string> paths;
    auto emit = [&](const std::string& name, auto&& writer) {
        std::string path = (dir / name).string();
        writer(path);
        paths.push_back(path);
    };

    emit("grid.csv", [&](const std::string& p) { write_grid_csv(result.rows, p); });
    for (const char* metric : kMetricNames) {
        emit("summary_" + std::string(metric) + ".csv",
             [&](const std::string& p) { write_summary_csv(result.rows, metric, p); });
    }
    for (const char* metric : kMetricNames) {
        emit("fig_" + std::string(metric) + ".csv",
             [&](const std::string& p) { write_fig_csv(result.rows, metric, p); });
    }
    emit("manifest.json", [&](const std::string& p) { write_manifest(result, info, p); });
    return paths;
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace skycast
