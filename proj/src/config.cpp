#include "skycast/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "skycast/errors.hpp"
#include "skycast/rng.hpp"

namespace skycast {

using nlohmann::json;

namespace {

json to_json(const HarnessConfig& c) {
    json j;
    j["split"] = {{"train_start", c.split.train_start.to_iso()},
                  {"train_end", c.split.train_end.to_iso()},
                  {"test_end", c.split.test_end.to_iso()}};
    j["ff_learning_rates"] = c.ff_learning_rates;
    j["rnn_learning_rates"] = c.rnn_learning_rates;
    j["epoch_grid"] = c.epoch_grid;
    j["testings"] = c.testings;
    std::vector<std::string> names;
    for (ModelKind kind : c.models) names.push_back(model_kind_name(kind));
    j["models"] = names;
    j["lstm_hidden"] = c.lstm_hidden;
    j["elm_hidden"] = c.elm_hidden;
    j["base_seed"] = c.base_seed;
    j["epoch_scale"] = c.epoch_scale;
    j["temperature_offset"] = c.temperature_offset;
    j["humidity_offset"] = c.humidity_offset;
    return j;
}

const std::vector<std::string> kKnownKeys = {
    "split",        "ff_learning_rates", "rnn_learning_rates", "epoch_grid",
    "testings",     "models",            "lstm_hidden",        "elm_hidden",
    "base_seed",    "epoch_scale",       "temperature_offset", "humidity_offset"};

} // namespace

HarnessConfig HarnessConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw DataError("config file '" + path + "' must hold a JSON object");

    HarnessConfig c;
    try {
        for (const auto& [key, value] : j.items()) {
            if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
                throw DataError("config key '" + key + "' is not recognized");
            }
        }
        if (j.contains("split")) {
            const json& s = j["split"];
            if (s.contains("train_start")) {
                c.split.train_start = Date::parse_iso(s["train_start"].get<std::string>());
            }
            if (s.contains("train_end")) {
                c.split.train_end = Date::parse_iso(s["train_end"].get<std::string>());
            }
            if (s.contains("test_end")) {
                c.split.test_end = Date::parse_iso(s["test_end"].get<std::string>());
            }
        }
        if (j.contains("ff_learning_rates")) {
            c.ff_learning_rates = j["ff_learning_rates"].get<std::vector<double>>();
        }
        if (j.contains("rnn_learning_rates")) {
            c.rnn_learning_rates = j["rnn_learning_rates"].get<std::vector<double>>();
        }
        if (j.contains("epoch_grid")) {
            c.epoch_grid = j["epoch_grid"].get<std::vector<long long>>();
        }
        if (j.contains("testings")) c.testings = j["testings"].get<std::vector<int>>();
        if (j.contains("models")) {
            c.models.clear();
            for (const auto& name : j["models"].get<std::vector<std::string>>()) {
                c.models.push_back(parse_model_kind(name));
            }
        }
        if (j.contains("lstm_hidden")) c.lstm_hidden = j["lstm_hidden"].get<std::size_t>();
        if (j.contains("elm_hidden")) c.elm_hidden = j["elm_hidden"].get<std::size_t>();
        if (j.contains("base_seed")) c.base_seed = j["base_seed"].get<std::uint64_t>();
        if (j.contains("epoch_scale")) c.epoch_scale = j["epoch_scale"].get<double>();
        if (j.contains("temperature_offset")) {
            c.temperature_offset = j["temperature_offset"].get<double>();
        }
        if (j.contains("humidity_offset")) c.humidity_offset = j["humidity_offset"].get<double>();
    } catch (const json::exception& e) {
        throw DataError("config file '" + path + "' has a malformed value: " + e.what());
    }
    c.validate();
    return c;
}

void HarnessConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write config file '" + path + "'");
    out << to_json(*this).dump(2) << '\n';
}

std::string HarnessConfig::canonical_json() const {
    return to_json(*this).dump();
}

std::string HarnessConfig::digest() const {
    return to_hex64(fnv1a64(canonical_json()));
}

void HarnessConfig::validate() const {
    if (!(split.train_start < split.train_end && split.train_end < split.test_end)) {
        throw DataError("config split dates must satisfy train_start < train_end < test_end");
    }
    auto check_lrs = [](const std::vector<double>& lrs, const char* which) {
        if (lrs.empty()) throw DataError(std::string(which) + " learning-rate grid is empty");
        for (double lr : lrs) {
            if (!(lr > 0.0)) {
                throw DataError(std::string(which) + " learning rate " + format_double(lr) +
                                " is not positive");
            }
        }
    };
    check_lrs(ff_learning_rates, "feedforward");
    check_lrs(rnn_learning_rates, "recurrent");
    if (epoch_grid.empty()) throw DataError("epoch grid is empty");
    for (long long e : epoch_grid) {
        if (e <= 0) throw DataError("epoch count " + std::to_string(e) + " is not positive");
    }
    if (testings.empty()) throw DataError("testings list is empty");
    for (int t : testings) {
        if (t < 1 || t > 4) throw DataError("testing id " + std::to_string(t) + " out of 1..4");
    }
    if (models.empty()) throw DataError("model list is empty");
    if (lstm_hidden < 1) throw DataError("lstm_hidden must be >= 1");
    if (elm_hidden < 1) throw DataError("elm_hidden must be >= 1");
    if (!(epoch_scale > 0.0)) throw DataError("epoch_scale must be positive");
}

std::string format_double(double value) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw std::logic_error("format_double failed");
    return std::string(buf, ptr);
}

double parse_double_str(const std::string& text, const std::string& what) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw DataError("cannot parse " + what + " from '" + text + "'");
    }
    return value;
}

std::string to_hex64(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xF];
        value >>= 4;
    }
    return out;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for digesting");
    std::ostringstream buf;
    buf << in.rdbuf();
    return to_hex64(fnv1a64(buf.str()));
}

} // namespace skycast
