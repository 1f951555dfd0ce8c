#include "eese/experiments.hpp"

#include "eese/allocator.hpp"
#include "eese/metrics.hpp"
#include "eese/numerics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace eese {

namespace {

// Runs body(i) for i in [0, n) on the available hardware threads. Each index
// writes only its own output slot, so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body)
{
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
}

std::string pc_tag(double pc)
{
    return fmt::format("pc{:g}", pc);
}

std::vector<double> eigen_gains(const FadingSpec& sub, std::size_t n)
{
    FadingSpec per_entry = sub;
    per_entry.mean_gain = sub.mean_gain / static_cast<double>(n);
    return svd_gains(draw_matrix(per_entry, n, n));
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double interpolate(std::span<const double> xs, std::span<const double> ys, double x)
{
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return ys.front();
    if (it == xs.end()) return ys.back();
    const std::size_t k = static_cast<std::size_t>(it - xs.begin());
    if (xs[k] == x) return ys[k];
    const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    return ys[k - 1] + w * (ys[k] - ys[k - 1]);
}

CurveSet ee_se_curve(const ExperimentSpec& spec, double pc)
{
    const auto grid = log_grid(spec.gamma.lo, spec.gamma.hi, spec.gamma.points);
    const LinkConfig cfg{pc, std::nullopt, 1.0};
    const auto points = trace_ee_se(cfg, grid);

    CurveSet out{"siso_ee_se_" + pc_tag(pc),
                 {"gamma", Quantity::gain},
                 {{"p_eepa", Quantity::power}, {"se", Quantity::spectral}, {"ee", Quantity::efficiency}},
                 {}};
    for (std::size_t k = 0; k < grid.size(); ++k)
        out.rows.push_back({grid[k], {eepa(grid[k], cfg), points[k].se, points[k].ee}});
    return out;
}

CurveSet scaling_curve(const ExperimentSpec& spec, System system)
{
    CurveSet out{system == System::ofdm ? "ofdm_scaling" : "mimo_scaling", {"n", Quantity::count}, {}, {}};
    for (double pc : spec.pc_values) {
        const auto tag = pc_tag(pc);
        out.series.push_back({"ee_mean_" + tag, Quantity::efficiency});
        out.series.push_back({"ee_stderr_" + tag, Quantity::efficiency});
        out.series.push_back({"se_mean_" + tag, Quantity::spectral});
        out.series.push_back({"se_stderr_" + tag, Quantity::spectral});
    }
    for (std::size_t n : spec.n_values) out.rows.push_back({static_cast<double>(n), {}});

    for (double pc : spec.pc_values) {
        const auto samples = scaling_samples(system, spec.fading, pc, spec.n_values, spec.trials, spec.budget);
        for (std::size_t k = 0; k < spec.n_values.size(); ++k) {
            const auto ee = sample_stats(samples.ee[k]);
            const auto se = sample_stats(samples.se[k]);
            out.rows[k].values.insert(out.rows[k].values.end(),
                                      {ee.mean, ee.std_error, se.mean, se.std_error});
        }
    }
    return out;
}

CurveSet table1_block(const ExperimentSpec& spec, System system, std::vector<std::size_t> dims)
{
    const auto samples = scaling_samples(system, spec.fading, 1.0, dims, spec.trials, spec.budget);
    CurveSet out{system == System::ofdm ? "table1_ofdm" : "table1_mimo",
                 {"n", Quantity::count},
                 {{"ee_mean", Quantity::efficiency},
                  {"se_mean", Quantity::spectral},
                  {"ee_gain", Quantity::ratio},
                  {"se_gain", Quantity::ratio}},
                 {}};
    const double ee_ref = sample_stats(samples.ee[0]).mean;
    const double se_ref = sample_stats(samples.se[0]).mean;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        const double ee = sample_stats(samples.ee[k]).mean;
        const double se = sample_stats(samples.se[k]).mean;
        out.rows.push_back({static_cast<double>(dims[k]), {ee, se, ee / ee_ref, se / se_ref}});
    }
    return out;
}

} // namespace

std::string_view to_string(Experiment experiment)
{
    switch (experiment) {
    case Experiment::siso_profiles: return "siso-profiles";
    case Experiment::siso_ee_se: return "siso-ee-se";
    case Experiment::pc_sweep: return "pc-sweep";
    case Experiment::ofdm_scaling: return "ofdm-sweep";
    case Experiment::mimo_scaling: return "mimo-sweep";
    case Experiment::fairness: return "fairness";
    case Experiment::table1: return "table1";
    }
    return "unknown";
}

void ExperimentSpec::validate() const
{
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (!(fading.mean_gain > 0.0)) throw std::invalid_argument("mean gain must be positive");
    if (pc_values.empty()) throw std::invalid_argument("need at least one pc value");
    for (double pc : pc_values)
        if (!(pc > 0.0) || !std::isfinite(pc)) throw std::invalid_argument("pc values must be positive");
    if (budget && !(*budget > 0.0)) throw std::invalid_argument("budget must be positive");
    if (!(gamma.lo > 0.0) || !(gamma.hi > gamma.lo) || gamma.points < 2)
        throw std::invalid_argument("gamma grid needs 0 < lo < hi and at least 2 points");

    const bool needs_n = experiment == Experiment::ofdm_scaling ||
                         experiment == Experiment::mimo_scaling || experiment == Experiment::fairness;
    if (needs_n && n_values.empty()) throw std::invalid_argument("need at least one n value");
    for (std::size_t k = 0; k < n_values.size(); ++k) {
        if (n_values[k] < 1) throw std::invalid_argument("n values must be at least 1");
        if (k > 0 && n_values[k] <= n_values[k - 1] && needs_n && experiment != Experiment::fairness)
            throw std::invalid_argument("n values must be strictly ascending");
    }
    if (experiment == Experiment::pc_sweep && pc_values.size() < 2)
        throw std::invalid_argument("pc-sweep needs at least two pc values");
    if (experiment == Experiment::fairness) {
        if (n_values.front() < 2) throw std::invalid_argument("fairness needs at least 2 links");
        if (!budget) throw std::invalid_argument("fairness needs a budget");
    }
    if (experiment == Experiment::siso_profiles && !budget)
        throw std::invalid_argument("siso-profiles needs an average power budget");
    if (experiment == Experiment::table1 &&
        std::find(pc_values.begin(), pc_values.end(), 1.0) == pc_values.end())
        throw std::invalid_argument("table1 is defined at pc = 1");
}

ExperimentSpec default_spec(Experiment experiment)
{
    ExperimentSpec spec;
    spec.experiment = experiment;
    spec.fading = FadingSpec{FadingKind::rayleigh, 1.0, 1};
    switch (experiment) {
    case Experiment::siso_profiles:
        spec.pc_values = {1.0};
        spec.budget = 1.0;
        break;
    case Experiment::siso_ee_se:
        spec.pc_values = {1.0};
        break;
    case Experiment::pc_sweep:
        spec.pc_values = {1.0, 2.0};
        break;
    case Experiment::ofdm_scaling:
        spec.pc_values = {1.0, 2.0};
        spec.n_values = {1, 2, 4, 8, 16, 32, 64};
        break;
    case Experiment::mimo_scaling:
        spec.pc_values = {0.25, 1.0, 2.0};
        spec.n_values = {1, 2, 4, 8, 16, 32};
        spec.trials = 1000;
        break;
    case Experiment::fairness:
        spec.pc_values = {0.25, 2.0};
        spec.n_values = {4};
        spec.trials = 200;
        spec.budget = 1.0;
        break;
    case Experiment::table1:
        spec.pc_values = {1.0};
        spec.trials = 2000;
        break;
    }
    return spec;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n)
{
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw std::invalid_argument("log_grid: need 0 < lo < hi, n >= 2");
    std::vector<double> grid(n);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t k = 0; k < n; ++k)
        grid[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

double compensated_sum(std::span<const double> values)
{
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double t = sum + v;
        carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return sum + carry;
}

SampleStats sample_stats(std::span<const double> values)
{
    if (values.empty()) throw std::invalid_argument("sample_stats: no samples");
    const double n = static_cast<double>(values.size());
    SampleStats s;
    s.mean = compensated_sum(values) / n;
    if (values.size() > 1) {
        std::vector<double> dev(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - s.mean) * (values[i] - s.mean);
        s.std_error = std::sqrt(compensated_sum(dev) / (n - 1.0) / n);
    }
    return s;
}

ScalingSamples scaling_samples(System system, const FadingSpec& fading, double pc,
                               std::span<const std::size_t> n_values, std::size_t trials,
                               std::optional<double> budget)
{
    ScalingSamples out;
    out.ee.assign(n_values.size(), std::vector<double>(trials));
    out.se.assign(n_values.size(), std::vector<double>(trials));

    parallel_for(trials, [&](std::size_t t) {
        const FadingSpec sub = substream(fading, t);
        for (std::size_t k = 0; k < n_values.size(); ++k) {
            const std::size_t n = n_values[k];
            GeeProblem problem{system == System::ofdm ? draw_gains(sub, n) : eigen_gains(sub, n), pc, budget};
            const Allocation a = gee_dinkelbach(problem);
            out.ee[k][t] = a.objective;
            double rate = 0.0;
            for (std::size_t i = 0; i < a.powers.size(); ++i) rate += se_of(problem.gains[i], a.powers[i]);
            out.se[k][t] = rate;
        }
    });
    return out;
}

std::vector<double> siso_ee_samples(const FadingSpec& fading, double pc, std::size_t trials)
{
    std::vector<double> ee(trials);
    const LinkConfig cfg{pc, std::nullopt, 1.0};
    for (std::size_t t = 0; t < trials; ++t) {
        const double gamma = draw_gains(substream(fading, t), 1).front();
        ee[t] = ee_of(gamma, eepa(gamma, cfg), cfg);
    }
    return ee;
}

FairnessTrial fairness_trial(const FadingSpec& fading, std::size_t links, double pc_lo, double pc_hi,
                             double budget)
{
    FairnessTrial trial;
    trial.gains = draw_gains(fading, links);
    Rng rng(derive_seed(fading.seed, 1));
    trial.pcs.resize(links);
    for (auto& pc : trial.pcs) pc = rng.uniform(pc_lo, pc_hi);

    std::vector<LinkConfig> cfgs(links);
    double pc_total = 0.0;
    for (std::size_t i = 0; i < links; ++i) {
        cfgs[i].pc = trial.pcs[i];
        pc_total += trial.pcs[i];
    }

    const std::array<Allocation, 4> solved = {
        gee_dinkelbach(GeeProblem{trial.gains, pc_total, budget}),
        wsee_ascent(trial.gains, cfgs, budget),
        wpee_ascent(trial.gains, cfgs, budget),
        wmee_maxmin(trial.gains, cfgs, budget),
    };
    for (std::size_t k = 0; k < solved.size(); ++k) {
        const auto report = evaluate(trial.gains, cfgs, solved[k].powers);
        trial.jain[k] = report.jain;
        trial.min_ee[k] = *std::min_element(report.per_link_ee.begin(), report.per_link_ee.end());
    }
    return trial;
}

std::vector<MatchedRatio> matched_se_ratio(std::span<const double> se_a, std::span<const double> ee_a,
                                           std::span<const double> se_b, std::span<const double> ee_b,
                                           std::size_t points)
{
    if (se_a.size() < 2 || se_b.size() < 2 || se_a.size() != ee_a.size() || se_b.size() != ee_b.size())
        throw std::invalid_argument("matched_se_ratio: malformed curves");
    if (points < 2) throw std::invalid_argument("matched_se_ratio: need at least 2 points");
    for (auto se : {se_a, se_b})
        for (std::size_t k = 1; k < se.size(); ++k)
            if (!(se[k] > se[k - 1])) throw std::invalid_argument("matched_se_ratio: SE not increasing");

    const double lo = std::max(se_a.front(), se_b.front());
    const double hi = std::min(se_a.back(), se_b.back());
    if (!(hi > lo)) throw std::invalid_argument("matched_se_ratio: curves do not overlap in SE");

    std::vector<MatchedRatio> out(points);
    for (std::size_t k = 0; k < points; ++k) {
        const double se = k + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
        const double a = interpolate(se_a, ee_a, se);
        const double b = interpolate(se_b, ee_b, se);
        out[k] = {se, a, b, b / a};
    }
    return out;
}

std::vector<CurveSet> run_siso_profiles(const ExperimentSpec& spec)
{
    spec.validate();
    const auto grid = log_grid(spec.gamma.lo, spec.gamma.hi, spec.gamma.points);
    // Water level calibrated so the average WPA power over the fading law equals the budget.
    const auto calibration = draw_gains(spec.fading, spec.trials);
    const double mu = water_level(calibration, *spec.budget * static_cast<double>(spec.trials));

    std::vector<CurveSet> out;
    for (double pc : spec.pc_values) {
        const LinkConfig cfg{pc, std::nullopt, 1.0};
        CurveSet curve{"siso_profiles_" + pc_tag(pc),
                       {"gamma", Quantity::gain},
                       {{"p_eepa", Quantity::power},
                        {"p_wpa", Quantity::power},
                        {"se_eepa", Quantity::spectral},
                        {"se_wpa", Quantity::spectral},
                        {"ee_eepa", Quantity::efficiency},
                        {"ee_wpa", Quantity::efficiency}},
                       {}};
        for (double g : grid) {
            const double p_ee = eepa(g, cfg);
            const double p_wf = std::max(0.0, mu - 1.0 / g);
            curve.rows.push_back({g,
                                  {p_ee, p_wf, se_of(g, p_ee), se_of(g, p_wf), ee_of(g, p_ee, cfg),
                                   ee_of(g, p_wf, cfg)}});
        }
        out.push_back(std::move(curve));
    }
    return out;
}

std::vector<CurveSet> run_siso_ee_se(const ExperimentSpec& spec)
{
    spec.validate();
    std::vector<CurveSet> out;
    for (double pc : spec.pc_values) out.push_back(ee_se_curve(spec, pc));
    return out;
}

std::vector<CurveSet> run_pc_sweep(const ExperimentSpec& spec)
{
    spec.validate();
    std::vector<CurveSet> out;
    for (double pc : spec.pc_values) out.push_back(ee_se_curve(spec, pc));

    auto column = [](const CurveSet& c, std::size_t j) {
        std::vector<double> v;
        for (const auto& r : c.rows) v.push_back(r.values[j]);
        return v;
    };
    for (std::size_t k = 0; k + 1 < spec.pc_values.size(); ++k) {
        const auto& a = out[k];
        const auto& b = out[k + 1];
        const auto ratios = matched_se_ratio(column(a, 1), column(a, 2), column(b, 1), column(b, 2),
                                             spec.gamma.points);
        const auto tag_a = pc_tag(spec.pc_values[k]);
        const auto tag_b = pc_tag(spec.pc_values[k + 1]);
        CurveSet curve{"pc_sweep_ratio_" + tag_a + "_" + tag_b,
                       {"se", Quantity::spectral},
                       {{"ee_" + tag_a, Quantity::efficiency},
                        {"ee_" + tag_b, Quantity::efficiency},
                        {"ee_ratio", Quantity::ratio}},
                       {}};
        for (const auto& r : ratios) curve.rows.push_back({r.se, {r.ee_a, r.ee_b, r.ratio}});
        out.push_back(std::move(curve));
    }
    return out;
}

std::vector<CurveSet> run_ofdm_scaling(const ExperimentSpec& spec)
{
    spec.validate();
    return {scaling_curve(spec, System::ofdm)};
}

std::vector<CurveSet> run_mimo_scaling(const ExperimentSpec& spec)
{
    spec.validate();
    return {scaling_curve(spec, System::mimo)};
}

std::vector<CurveSet> run_fairness(const ExperimentSpec& spec)
{
    spec.validate();
    const std::size_t links = spec.n_values.front();
    const double pc_lo = *std::min_element(spec.pc_values.begin(), spec.pc_values.end());
    const double pc_hi = *std::max_element(spec.pc_values.begin(), spec.pc_values.end());

    std::vector<FairnessTrial> trials(spec.trials);
    parallel_for(spec.trials, [&](std::size_t t) {
        trials[t] = fairness_trial(substream(spec.fading, t), links, pc_lo, pc_hi, *spec.budget);
    });

    static constexpr std::array<const char*, 4> kNames = {"gee", "wsee", "wpee", "wmee"};
    CurveSet per_trial{"fairness_trials", {"trial", Quantity::count}, {}, {}};
    for (const char* name : kNames) per_trial.series.push_back({fmt::format("jain_{}", name), Quantity::index});
    for (const char* name : kNames)
        per_trial.series.push_back({fmt::format("min_ee_{}", name), Quantity::efficiency});
    for (std::size_t t = 0; t < trials.size(); ++t) {
        CurveRow row{static_cast<double>(t), {}};
        row.values.insert(row.values.end(), trials[t].jain.begin(), trials[t].jain.end());
        row.values.insert(row.values.end(), trials[t].min_ee.begin(), trials[t].min_ee.end());
        per_trial.rows.push_back(std::move(row));
    }

    // Rows in increasing fairness order: 0 GEE, 1 WSEE, 2 WPEE, 3 WMEE.
    CurveSet summary{"fairness_summary",
                     {"objective_index", Quantity::count},
                     {{"median_jain", Quantity::index},
                      {"mean_jain", Quantity::index},
                      {"median_min_ee", Quantity::efficiency}},
                     {}};
    for (std::size_t k = 0; k < kNames.size(); ++k) {
        std::vector<double> jain;
        std::vector<double> min_ee;
        for (const auto& t : trials) {
            jain.push_back(t.jain[k]);
            min_ee.push_back(t.min_ee[k]);
        }
        summary.rows.push_back({static_cast<double>(k), {median(jain), sample_stats(jain).mean, median(min_ee)}});
    }
    return {std::move(per_trial), std::move(summary)};
}

std::vector<CurveSet> run_table1(const ExperimentSpec& spec)
{
    spec.validate();
    return {table1_block(spec, System::ofdm, {1, 16, 64}), table1_block(spec, System::mimo, {1, 4, 32})};
}

std::vector<CurveSet> run(const ExperimentSpec& spec)
{
    switch (spec.experiment) {
    case Experiment::siso_profiles: return run_siso_profiles(spec);
    case Experiment::siso_ee_se: return run_siso_ee_se(spec);
    case Experiment::pc_sweep: return run_pc_sweep(spec);
    case Experiment::ofdm_scaling: return run_ofdm_scaling(spec);
    case Experiment::mimo_scaling: return run_mimo_scaling(spec);
    case Experiment::fairness: return run_fairness(spec);
    case Experiment::table1: return run_table1(spec);
    }
    throw std::invalid_argument("unknown experiment");
}

} // namespace eese
