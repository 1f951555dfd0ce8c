#pragma once

#include "eese/config.hpp"
#include "eese/experiments.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace eese {

/// Column header for a series: name plus unit suffix, e.g. `ee_bits_per_J`.
std::string column_name(const Series& series, Units units);

/// CSV text of a curve: header row, then one line per row with 12 significant
/// digits. Rates and efficiencies are divided by ln 2 when units are bits.
std::string to_csv(const CurveSet& curve, Units units);

/// Hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

struct OutputFile {
    std::string name;
    std::string sha256;
};

/// Writes `<label>.csv` for every curve into `dir` (created if missing).
std::vector<OutputFile> write_curves(const std::filesystem::path& dir, const std::vector<CurveSet>& curves,
                                     Units units);

struct RunManifest {
    std::string command;
    ExperimentSpec spec;
    Units units = Units::bits;
    std::vector<OutputFile> outputs;
    std::optional<double> wall_time_s;
};

/// Flat `key: value` text, one entry per line.
std::string to_text(const RunManifest& manifest);

inline constexpr const char* kToolVersion = "1.0.0";

} // namespace eese
