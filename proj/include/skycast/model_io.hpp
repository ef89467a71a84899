#pragma once

#include <string>

#include "skycast/models.hpp"
#include "skycast/windows.hpp"

namespace skycast {

// A trained model plus everything needed to run it on raw data.
struct SavedModel {
    ModelParams params;
    WindowSpec spec;
    NormalizationParams norm;
};

// Structured text format, version header "skycast-model v1". Tensors are
// written row-major with shortest round-trip decimal values, so save/load is
// bit-exact. A bare ElmParams is stored as a one-member ensemble.
void save_model(const SavedModel& model, const std::string& path);
SavedModel load_model(const std::string& path);

} // namespace skycast
