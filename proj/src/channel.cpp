#include "eese/channel.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

namespace eese {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void validate(const FadingSpec& spec)
{
    if (!(spec.mean_gain > 0.0) || !std::isfinite(spec.mean_gain))
        throw std::invalid_argument("fading mean gain must be positive and finite");
}

} // namespace

std::string_view to_string(FadingKind kind)
{
    return kind == FadingKind::deterministic ? "deterministic" : "rayleigh";
}

FadingKind parse_fading_kind(std::string_view text)
{
    if (text == "deterministic") return FadingKind::deterministic;
    if (text == "rayleigh") return FadingKind::rayleigh;
    throw std::invalid_argument("unknown fading kind '" + std::string(text) + "'");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

FadingSpec substream(const FadingSpec& spec, std::uint64_t stream)
{
    FadingSpec out = spec;
    out.seed = derive_seed(spec.seed, stream);
    return out;
}

std::complex<double> Rng::complex_gaussian(double variance)
{
    // Box-Muller in polar form: |z|^2 is exponential with the requested mean.
    const double radius = std::sqrt(-variance * std::log(uniform_open()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    return std::polar(radius, angle);
}

std::vector<double> draw_gains(const FadingSpec& spec, std::size_t n)
{
    validate(spec);
    if (n == 0) throw std::invalid_argument("draw_gains: n must be at least 1");
    if (spec.kind == FadingKind::deterministic) return std::vector<double>(n, spec.mean_gain);

    Rng rng(spec.seed);
    std::vector<double> gains(n);
    for (auto& g : gains) g = rng.exponential(spec.mean_gain);
    return gains;
}

ComplexMatrix draw_matrix(const FadingSpec& spec, std::size_t rows, std::size_t cols)
{
    validate(spec);
    if (rows == 0 || cols == 0) throw std::invalid_argument("draw_matrix: empty shape");

    std::vector<std::complex<double>> entries(rows * cols);
    if (spec.kind == FadingKind::deterministic) {
        std::fill(entries.begin(), entries.end(), std::sqrt(spec.mean_gain));
    } else {
        Rng rng(spec.seed);
        for (auto& z : entries) z = rng.complex_gaussian(spec.mean_gain);
    }
    return ComplexMatrix(rows, cols, std::move(entries));
}

} // namespace eese
