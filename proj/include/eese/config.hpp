#pragma once

#include "eese/experiments.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eese {

/// Malformed config file or flag value; the message names the offending line when known.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Units { nats, bits };

std::string_view to_string(Units units);

/// Every user-settable run parameter. Unset fields fall back to the next layer:
/// flags override the config file, which overrides the experiment defaults.
struct RunSettings {
    std::optional<std::vector<double>> pc;
    std::optional<std::vector<std::size_t>> n;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> budget;
    std::optional<Units> units;
    std::optional<std::string> out;
    std::optional<FadingKind> fading;
    std::optional<double> mean_gain;
    std::optional<double> gamma_min;
    std::optional<double> gamma_max;
    std::optional<std::size_t> gamma_points;

    /// Fields set in `over` replace those in *this.
    void merge(const RunSettings& over);

    /// Parse and store one `key=value` assignment. Throws config_error.
    void assign(std::string_view key, std::string_view value);
};

std::vector<double> parse_real_list(std::string_view text);
std::vector<std::size_t> parse_count_list(std::string_view text);

/// Plain-text config: one `key=value` per line, `#` starts a comment, blank
/// lines ignored, unknown keys rejected. Errors name the 1-based line.
RunSettings parse_config(std::string_view text);
RunSettings load_config(const std::filesystem::path& path);

/// Experiment defaults with `settings` applied on top.
ExperimentSpec resolve_spec(Experiment experiment, const RunSettings& settings);

} // namespace eese
