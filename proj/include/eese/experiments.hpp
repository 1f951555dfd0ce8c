#pragma once

#include "eese/channel.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eese {

enum class Experiment { siso_profiles, siso_ee_se, pc_sweep, ofdm_scaling, mimo_scaling, fairness, table1 };

std::string_view to_string(Experiment experiment);

struct GammaGrid {
    double lo = 1e-2;
    double hi = 1e2;
    std::size_t points = 200;
};

struct ExperimentSpec {
    Experiment experiment = Experiment::siso_ee_se;
    FadingSpec fading;
    std::vector<double> pc_values;
    std::vector<std::size_t> n_values;
    std::size_t trials = 10000;
    std::optional<double> budget;
    GammaGrid gamma;

    void validate() const;
};

/// Documented defaults for each experiment (pc values, dimensions, trials, budget).
ExperimentSpec default_spec(Experiment experiment);

/// Physical kind of a column; decides its unit suffix and nats/bits conversion.
enum class Quantity { gain, power, spectral, efficiency, ratio, index, count };

struct Series {
    std::string name;
    Quantity quantity;
};

struct CurveRow {
    double x;
    std::vector<double> values;
};

/// One output table: x strictly increasing, one value per series in each row.
struct CurveSet {
    std::string label;
    Series x;
    std::vector<Series> series;
    std::vector<CurveRow> rows;
};

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// Sum with Neumaier compensation, in index order.
double compensated_sum(std::span<const double> values);

struct SampleStats {
    double mean = 0.0;
    double std_error = 0.0;
};
SampleStats sample_stats(std::span<const double> values);

enum class System { ofdm, mimo };

/// Per-trial optimized GEE and sum SE, indexed [n_index][trial].
/// Trial t uses sub-stream t of `fading` for every N (common random numbers).
/// MIMO draws N x N matrices with per-entry mean gain mean_gain / N.
struct ScalingSamples {
    std::vector<std::vector<double>> ee;
    std::vector<std::vector<double>> se;
};
ScalingSamples scaling_samples(System system, const FadingSpec& fading, double pc,
                               std::span<const std::size_t> n_values, std::size_t trials,
                               std::optional<double> budget = std::nullopt);

/// Per-trial SISO EE at the EEPA power, gain from the first draw of sub-stream t.
std::vector<double> siso_ee_samples(const FadingSpec& fading, double pc, std::size_t trials);

/// One multi-link instance optimized under each objective, in the order GEE, WSEE, WPEE, WMEE.
struct FairnessTrial {
    std::vector<double> gains;
    std::vector<double> pcs;
    std::array<double, 4> jain{};
    std::array<double, 4> min_ee{};
};
FairnessTrial fairness_trial(const FadingSpec& fading, std::size_t links, double pc_lo,
                             double pc_hi, double budget);

/// EE of curve `b` divided by EE of curve `a` at matched SE, by linear
/// interpolation on each (SE, EE) curve. Rows: (se, ee_a, ee_b, ratio).
struct MatchedRatio {
    double se;
    double ee_a;
    double ee_b;
    double ratio;
};
std::vector<MatchedRatio> matched_se_ratio(std::span<const double> se_a, std::span<const double> ee_a,
                                           std::span<const double> se_b, std::span<const double> ee_b,
                                           std::size_t points);

std::vector<CurveSet> run_siso_profiles(const ExperimentSpec& spec);
std::vector<CurveSet> run_siso_ee_se(const ExperimentSpec& spec);
std::vector<CurveSet> run_pc_sweep(const ExperimentSpec& spec);
std::vector<CurveSet> run_ofdm_scaling(const ExperimentSpec& spec);
std::vector<CurveSet> run_mimo_scaling(const ExperimentSpec& spec);
std::vector<CurveSet> run_fairness(const ExperimentSpec& spec);
std::vector<CurveSet> run_table1(const ExperimentSpec& spec);

std::vector<CurveSet> run(const ExperimentSpec& spec);

} // namespace eese
