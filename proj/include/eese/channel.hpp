#pragma once

#include "eese/numerics.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace eese {

enum class FadingKind { deterministic, rayleigh };

std::string_view to_string(FadingKind kind);
FadingKind parse_fading_kind(std::string_view text);

struct FadingSpec {
    FadingKind kind = FadingKind::rayleigh;
    double mean_gain = 1.0; ///< average of gamma
    std::uint64_t seed = 1;
};

/// Seed for stream `stream` of a run seeded with `seed` (SplitMix64 finalizer
/// applied to both words). Streams are used one per Monte-Carlo trial.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Same fading law, independent sub-stream.
FadingSpec substream(const FadingSpec& spec, std::uint64_t stream);

/// mt19937_64 with distribution transforms written out here so the variates
/// do not depend on a particular standard library's <random> distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform on (0, 1].
    double uniform_open() { return 1.0 - uniform(); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential(double mean) { return -mean * std::log(uniform_open()); }

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_gaussian(double variance);

private:
    std::mt19937_64 engine_;
};

/// n channel gains; rayleigh gives i.i.d. exponential gains (|h|^2 of CN(0, mean)).
std::vector<double> draw_gains(const FadingSpec& spec, std::size_t n);

/// rows x cols matrix with i.i.d. CN(0, mean_gain) entries. The deterministic
/// kind fills every entry with sqrt(mean_gain).
ComplexMatrix draw_matrix(const FadingSpec& spec, std::size_t rows, std::size_t cols);

} // namespace eese
