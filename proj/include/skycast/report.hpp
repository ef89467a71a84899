#pragma once

#include <map>
#include <string>
#include <vector>

#include "skycast/experiment.hpp"

namespace skycast {

inline constexpr const char* kCodeVersion = "skycast 0.1.0";
inline constexpr const char* kMetricNames[] = {"rmse", "mape", "mae", "theils_u"};

// Run provenance stored in the manifest. timestamp and per-row train_seconds
// are the only fields allowed to differ between reruns of identical inputs.
struct ManifestInfo {
    std::string config_digest;
    std::string code_version = kCodeVersion;
    std::map<std::string, std::string> data_digests; // city -> fnv1a64 hex
    std::uint64_t base_seed = 1;
    double epoch_scale = 1.0;
    std::string timestamp;

    bool operator==(const ManifestInfo&) const = default;
};

// One row per ResultRow, every spec field plus metrics; no timing columns so
// the file is byte-stable across reruns and thread counts.
void write_grid_csv(const std::vector<ResultRow>& rows, const std::string& path);
// Inverse of write_grid_csv (train_seconds comes back as 0).
std::vector<ResultRow> parse_grid_csv(const std::string& path);

// Per-metric winners table: one row per (city, season).
void write_summary_csv(const std::vector<ResultRow>& rows, const std::string& metric_name,
                       const std::string& path);
// city x season matrix of best values for the named metric.
void write_fig_csv(const std::vector<ResultRow>& rows, const std::string& metric_name,
                   const std::string& path);

void write_manifest(const GridResult& result, const ManifestInfo& info,
                    const std::string& path);
std::pair<GridResult, ManifestInfo> load_manifest(const std::string& path);

// Writes grid.csv, summary_<metric>.csv x4, fig_<metric>.csv x4 and
// manifest.json under out_dir (created if missing); returns the paths.
std::vector<std::string> emit_reports(const GridResult& result, const ManifestInfo& info,
                                      const std::string& out_dir);

std::string csv_escape(const std::string& field);
std::vector<std::string> split_csv_line(const std::string& line);

// Current UTC time as an ISO-8601 string.
std::string utc_timestamp();

} // namespace skycast
