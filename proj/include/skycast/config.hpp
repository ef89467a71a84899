#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skycast/models.hpp"
#include "skycast/series.hpp"

namespace skycast {

// Everything the grid runner needs beyond the data itself. Loadable from a
// JSON file; unknown keys are rejected, missing keys keep their defaults.
struct HarnessConfig {
    SplitDates split;

    std::vector<double> ff_learning_rates{0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<double> rnn_learning_rates{0.001, 0.003, 0.005, 0.007, 0.009};
    std::vector<long long> epoch_grid{2500, 5000, 7500};
    std::vector<int> testings{1, 2, 3, 4};
    std::vector<ModelKind> models{ModelKind::ANN, ModelKind::DNN, ModelKind::ELM,
                                  ModelKind::LSTM, ModelKind::LSTM_PC};

    std::size_t lstm_hidden = 4;
    std::size_t elm_hidden = 20;

    std::uint64_t base_seed = 1;
    double epoch_scale = 1.0;

    double temperature_offset = 273.15;
    double humidity_offset = 0.0;

    bool operator==(const HarnessConfig&) const = default;

    double offset_for(TargetKind kind) const {
        return kind == TargetKind::Temperature ? temperature_offset : humidity_offset;
    }

    static HarnessConfig load(const std::string& path);
    void save(const std::string& path) const;

    // Canonical JSON serialization (sorted keys); identical configs produce
    // identical strings.
    std::string canonical_json() const;
    // fnv1a64 of canonical_json(), as fixed-width hex.
    std::string digest() const;

    void validate() const;
};

// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double value);
// Inverse of format_double; throws DataError on trailing garbage.
double parse_double_str(const std::string& text, const std::string& what);

std::string to_hex64(std::uint64_t value);

// fnv1a64 over a file's raw bytes, as hex; throws DataError if unreadable.
std::string file_digest(const std::string& path);

} // namespace skycast
