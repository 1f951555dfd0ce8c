#include "eese/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace eese {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

// Locale-independent full-token parse.
template <class T>
T parse_number(std::string_view text)
{
    text = trim(text);
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end)
        throw config_error("invalid number '" + std::string(text) + "'");
    if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(value)) throw config_error("non-finite number '" + std::string(text) + "'");
    return value;
}

double parse_positive(std::string_view text)
{
    const double v = parse_number<double>(text);
    if (!(v > 0.0)) throw config_error("expected a positive number, got '" + std::string(trim(text)) + "'");
    return v;
}

std::size_t parse_count(std::string_view text)
{
    const auto v = parse_number<std::size_t>(text);
    if (v < 1) throw config_error("expected a count >= 1, got '" + std::string(trim(text)) + "'");
    return v;
}

} // namespace

std::string_view to_string(Units units)
{
    return units == Units::bits ? "bits" : "nats";
}

std::vector<double> parse_real_list(std::string_view text)
{
    std::vector<double> out;
    for (auto item : split(text, ',')) out.push_back(parse_positive(item));
    return out;
}

std::vector<std::size_t> parse_count_list(std::string_view text)
{
    std::vector<std::size_t> out;
    for (auto item : split(text, ',')) out.push_back(parse_count(item));
    return out;
}

void RunSettings::assign(std::string_view key, std::string_view value)
{
    key = trim(key);
    value = trim(value);
    if (key == "pc") pc = parse_real_list(value);
    else if (key == "n") n = parse_count_list(value);
    else if (key == "trials") trials = parse_count(value);
    else if (key == "seed") seed = parse_number<std::uint64_t>(value);
    else if (key == "budget") budget = parse_positive(value);
    else if (key == "units") {
        if (value == "bits") units = Units::bits;
        else if (value == "nats") units = Units::nats;
        else throw config_error("units must be 'nats' or 'bits', got '" + std::string(value) + "'");
    }
    else if (key == "out") {
        if (value.empty()) throw config_error("out must not be empty");
        out = std::string(value);
    }
    else if (key == "fading") {
        try {
            fading = parse_fading_kind(value);
        } catch (const std::invalid_argument& e) {
            throw config_error(e.what());
        }
    }
    else if (key == "mean_gain") mean_gain = parse_positive(value);
    else if (key == "gamma_min") gamma_min = parse_positive(value);
    else if (key == "gamma_max") gamma_max = parse_positive(value);
    else if (key == "gamma_points") gamma_points = parse_count(value);
    else throw config_error("unknown key '" + std::string(key) + "'");
}

void RunSettings::merge(const RunSettings& over)
{
    auto take = [](auto& mine, const auto& theirs) {
        if (theirs) mine = theirs;
    };
    take(pc, over.pc);
    take(n, over.n);
    take(trials, over.trials);
    take(seed, over.seed);
    take(budget, over.budget);
    take(units, over.units);
    take(out, over.out);
    take(fading, over.fading);
    take(mean_gain, over.mean_gain);
    take(gamma_min, over.gamma_min);
    take(gamma_max, over.gamma_max);
    take(gamma_points, over.gamma_points);
}

RunSettings parse_config(std::string_view text)
{
    RunSettings settings;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? end : end - start);
        ++line_no;
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        try {
            if (eq == std::string_view::npos) throw config_error("expected key=value");
            settings.assign(line.substr(0, eq), line.substr(eq + 1));
        } catch (const config_error& e) {
            throw config_error("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return settings;
}

RunSettings load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot read config file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

ExperimentSpec resolve_spec(Experiment experiment, const RunSettings& s)
{
    ExperimentSpec spec = default_spec(experiment);
    if (s.pc) spec.pc_values = *s.pc;
    if (s.n) spec.n_values = *s.n;
    if (s.trials) spec.trials = *s.trials;
    if (s.seed) spec.fading.seed = *s.seed;
    if (s.budget) spec.budget = *s.budget;
    if (s.fading) spec.fading.kind = *s.fading;
    if (s.mean_gain) spec.fading.mean_gain = *s.mean_gain;
    if (s.gamma_min) spec.gamma.lo = *s.gamma_min;
    if (s.gamma_max) spec.gamma.hi = *s.gamma_max;
    if (s.gamma_points) spec.gamma.points = *s.gamma_points;
    return spec;
}

} // namespace eese
