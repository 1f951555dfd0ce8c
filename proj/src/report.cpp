#include "eese/report.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <fstream>
#include <numbers>
#include <stdexcept>

namespace eese {

namespace {

std::string unit_suffix(Quantity q, Units units)
{
    const char* base = units == Units::bits ? "bits" : "nats";
    switch (q) {
    case Quantity::power: return "_W";
    case Quantity::spectral: return fmt::format("_{}_per_s_Hz", base);
    case Quantity::efficiency: return fmt::format("_{}_per_J", base);
    case Quantity::gain:
    case Quantity::ratio:
    case Quantity::index:
    case Quantity::count: return "";
    }
    return "";
}

double convert(double value, Quantity q, Units units)
{
    const bool rate = q == Quantity::spectral || q == Quantity::efficiency;
    return rate && units == Units::bits ? value / std::numbers::ln2 : value;
}

std::string number(double v)
{
    return fmt::format("{:.12g}", v);
}

template <class Range, class F>
std::string join(const Range& items, F&& f)
{
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += ',';
        out += f(item);
    }
    return out;
}

} // namespace

std::string column_name(const Series& series, Units units)
{
    return series.name + unit_suffix(series.quantity, units);
}

std::string to_csv(const CurveSet& curve, Units units)
{
    std::string text = column_name(curve.x, units);
    for (const auto& s : curve.series) text += "," + column_name(s, units);
    text += '\n';
    for (const auto& row : curve.rows) {
        if (row.values.size() != curve.series.size())
            throw std::logic_error("curve '" + curve.label + "': row width does not match series");
        text += number(convert(row.x, curve.x.quantity, units));
        for (std::size_t j = 0; j < row.values.size(); ++j)
            text += "," + number(convert(row.values[j], curve.series[j].quantity, units));
        text += '\n';
    }
    return text;
}

std::string sha256_hex(std::string_view data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 digest failed");
    std::string hex;
    for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::vector<OutputFile> write_curves(const std::filesystem::path& dir, const std::vector<CurveSet>& curves,
                                     Units units)
{
    std::filesystem::create_directories(dir);
    std::vector<OutputFile> files;
    for (const auto& curve : curves) {
        const std::string text = to_csv(curve, units);
        const std::string name = curve.label + ".csv";
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) throw std::runtime_error("cannot write '" + (dir / name).string() + "'");
        files.push_back({name, sha256_hex(text)});
    }
    return files;
}

std::string to_text(const RunManifest& m)
{
    const auto& s = m.spec;
    std::string text;
    auto line = [&](std::string_view key, const std::string& value) {
        text += fmt::format("{}: {}\n", key, value);
    };
    line("tool", "eese");
    line("version", kToolVersion);
    line("command", m.command);
    line("experiment", std::string(to_string(s.experiment)));
    line("seed", std::to_string(s.fading.seed));
    line("fading", std::string(to_string(s.fading.kind)));
    line("mean_gain", number(s.fading.mean_gain));
    line("pc", join(s.pc_values, number));
    line("n", join(s.n_values, [](std::size_t n) { return std::to_string(n); }));
    line("trials", std::to_string(s.trials));
    line("budget", s.budget ? number(*s.budget) : "none");
    line("gamma_grid", fmt::format("{},{},{}", number(s.gamma.lo), number(s.gamma.hi), s.gamma.points));
    line("units", std::string(to_string(m.units)));
    if (m.wall_time_s) line("wall_time_s", fmt::format("{:.3f}", *m.wall_time_s));
    line("outputs", std::to_string(m.outputs.size()));
    for (const auto& f : m.outputs) line("sha256." + f.name, f.sha256);
    return text;
}

} // namespace eese
