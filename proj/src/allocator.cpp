#include "eese/allocator.hpp"

#include "eese/errors.hpp"
#include "eese/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace eese {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_gain(double gamma)
{
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("channel gain must be finite and >= 0");
}

bool has_positive(std::span<const double> gains)
{
    return std::any_of(gains.begin(), gains.end(), [](double g) { return g > 0.0; });
}

void check_links(std::span<const double> gains, std::span<const LinkConfig> cfgs, double p_total)
{
    if (gains.empty()) throw std::invalid_argument("need at least one link");
    if (gains.size() != cfgs.size())
        throw std::invalid_argument("need one link configuration per gain");
    for (double g : gains) check_gain(g);
    for (const auto& c : cfgs) c.validate();
    if (!(p_total > 0.0)) throw std::invalid_argument("total power budget must be positive");
}

double link_cap(const LinkConfig& cfg)
{
    return cfg.p_max.value_or(kInf);
}

// Maximizer of f on [lo, hi], comparing the golden-section interior point
// against both endpoints. Exact for unimodal f up to the bracket width.
double golden_max(const std::function<double(double)>& f, double lo, double hi)
{
    if (!(hi > lo)) return lo;
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < 400 && (b - a) > 1e-13 * (1.0 + std::abs(a)); ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        }
    }
    double best = f1 >= f2 ? x1 : x2;
    double best_val = std::max(f1, f2);
    for (double edge : {lo, hi}) {
        const double v = f(edge);
        if (v > best_val) {
            best_val = v;
            best = edge;
        }
    }
    return best;
}

// Global-ish 1-D maximizer: coarse scan, then golden refinement around the best sample.
double scan_then_golden(const std::function<double(double)>& f, double lo, double hi)
{
    if (!(hi > lo)) return lo;
    constexpr int kSamples = 32;
    const double h = (hi - lo) / kSamples;
    int best = 0;
    double best_val = -kInf;
    for (int k = 0; k <= kSamples; ++k) {
        const double v = f(k == kSamples ? hi : lo + k * h);
        if (v > best_val) {
            best_val = v;
            best = k;
        }
    }
    const double a = best == 0 ? lo : lo + (best - 1) * h;
    const double b = best == kSamples ? hi : std::min(hi, lo + (best + 1) * h);
    return golden_max(f, a, b);
}

using Term = std::function<double(std::size_t, double)>;

// Projected coordinate ascent on a separable objective sum_i term(i, p_i)
// over {0 <= p_i <= cap_i, sum p <= p_total}. Single-coordinate moves use the
// slack in the budget; pairwise transfers move power along e_i - e_j.
std::vector<double> coordinate_ascent(const Term& term, std::vector<double> powers,
                                      std::span<const double> caps, double p_total)
{
    const std::size_t n = powers.size();
    auto total = [&] {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += term(i, powers[i]);
        return acc;
    };

    double value = total();
    constexpr int kMaxSweeps = 10000;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        const double before = value;

        for (std::size_t i = 0; i < n; ++i) {
            const double others =
                std::accumulate(powers.begin(), powers.end(), 0.0) - powers[i];
            const double hi = std::max(powers[i], std::min(caps[i], p_total - others));
            const double x = golden_max([&](double p) { return term(i, p); }, 0.0, hi);
            if (term(i, x) > term(i, powers[i])) powers[i] = x;
        }

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double s = powers[i] + powers[j];
                const double lo = std::max(0.0, s - caps[j]);
                const double hi = std::min(caps[i], s);
                auto pair = [&](double x) { return term(i, x) + term(j, s - x); };
                const double x = scan_then_golden(pair, lo, hi);
                if (pair(x) > pair(powers[i])) {
                    powers[i] = x;
                    powers[j] = s - x;
                }
            }
        }

        value = total();
        if (value - before < 1e-9) break;
    }
    return powers;
}

std::vector<double> ascent_start(std::span<const double> gains, std::span<const LinkConfig> cfgs,
                                 double p_total)
{
    std::vector<double> start(gains.size());
    for (std::size_t i = 0; i < gains.size(); ++i) start[i] = eepa(gains[i], cfgs[i]);
    const double sum = std::accumulate(start.begin(), start.end(), 0.0);
    if (sum > p_total)
        for (auto& p : start) p *= p_total / sum;
    return start;
}

std::vector<double> caps_of(std::span<const LinkConfig> cfgs)
{
    std::vector<double> caps(cfgs.size());
    std::transform(cfgs.begin(), cfgs.end(), caps.begin(), link_cap);
    return caps;
}

} // namespace

void LinkConfig::validate() const
{
    if (!(pc > 0.0) || !std::isfinite(pc))
        throw std::domain_error("circuit power must be positive and finite");
    if (p_max && !(*p_max > 0.0)) throw std::invalid_argument("transmit power cap must be positive");
    if (!(weight > 0.0) || !std::isfinite(weight))
        throw std::invalid_argument("link weight must be positive and finite");
}

double se_of(double gamma, double p)
{
    return std::log1p(gamma * p);
}

double ee_of(double gamma, double p, const LinkConfig& cfg)
{
    return se_of(gamma, p) / (cfg.pc + p);
}

double eepa(double gamma, const LinkConfig& cfg)
{
    cfg.validate();
    check_gain(gamma);
    if (gamma == 0.0) return 0.0;

    const double w = lambert_w0((gamma * cfg.pc - 1.0) / std::numbers::e);
    const double p = std::expm1(1.0 + w) / gamma;
    return std::clamp(p, 0.0, link_cap(cfg));
}

double eepa(double gamma, double pc)
{
    return eepa(gamma, LinkConfig{pc, std::nullopt, 1.0});
}

double water_level(std::span<const double> gains, double total_power)
{
    if (!(total_power > 0.0)) throw std::invalid_argument("water_level: power must be positive");
    for (double g : gains) check_gain(g);
    if (!has_positive(gains)) throw infeasible_error("water-filling needs at least one positive gain");

    double floor = kInf;
    double ceiling = 0.0;
    for (double g : gains) {
        if (g <= 0.0) continue;
        floor = std::min(floor, 1.0 / g);
        ceiling = std::max(ceiling, 1.0 / g);
    }

    auto excess = [&](double mu) {
        double acc = 0.0;
        for (double g : gains)
            if (g > 0.0) acc += std::max(0.0, mu - 1.0 / g);
        return acc - total_power;
    };
    const double hi = ceiling + total_power;
    const double mu = bisect(excess, floor, hi, 1e-15 * hi);

    // Exact level for the active set found by bisection.
    double inv_sum = 0.0;
    std::size_t active = 0;
    for (double g : gains) {
        if (g > 0.0 && 1.0 / g < mu) {
            inv_sum += 1.0 / g;
            ++active;
        }
    }
    if (active == 0) return mu;
    const double exact = (total_power + inv_sum) / static_cast<double>(active);
    return std::abs(exact - mu) <= 1e-9 * hi ? exact : mu;
}

Allocation wpa(std::span<const double> gains, double p_avg)
{
    if (gains.empty()) throw std::invalid_argument("wpa: no channels");
    const double mu = water_level(gains, p_avg * static_cast<double>(gains.size()));

    Allocation out;
    out.powers.resize(gains.size());
    for (std::size_t i = 0; i < gains.size(); ++i) {
        const double g = gains[i];
        out.powers[i] = g > 0.0 ? std::max(0.0, mu - 1.0 / g) : 0.0;
        out.objective += se_of(g, out.powers[i]);
    }
    return out;
}

Allocation gee_dinkelbach(const GeeProblem& problem, double tol)
{
    if (!(tol > 0.0)) throw std::invalid_argument("gee_dinkelbach: tol must be positive");
    if (!(problem.pc > 0.0) || !std::isfinite(problem.pc))
        throw std::domain_error("circuit power must be positive and finite");
    if (problem.p_max_total && !(*problem.p_max_total > 0.0))
        throw std::invalid_argument("total power cap must be positive");
    for (double g : problem.gains) check_gain(g);
    if (!has_positive(problem.gains)) throw infeasible_error("GEE problem needs a positive gain");

    const auto& gains = problem.gains;
    double min_gain = kInf;
    for (double g : gains)
        if (g > 0.0) min_gain = std::min(min_gain, g);
    const double cap_level = problem.p_max_total ? water_level(gains, *problem.p_max_total) : kInf;
    const double fallback_level = 1e3 / min_gain;

    std::vector<double> powers(gains.size());
    auto solve_inner = [&](double eta) {
        const double level = std::min(eta > 0.0 ? 1.0 / eta : fallback_level, cap_level);
        for (std::size_t i = 0; i < gains.size(); ++i)
            powers[i] = gains[i] > 0.0 ? std::max(0.0, level - 1.0 / gains[i]) : 0.0;
    };

    double eta = 0.0;
    constexpr int kMaxIterations = 1000;
    for (int it = 0; it < kMaxIterations; ++it) {
        solve_inner(eta);
        double rate = 0.0;
        double consumed = problem.pc;
        for (std::size_t i = 0; i < gains.size(); ++i) {
            rate += se_of(gains[i], powers[i]);
            consumed += powers[i];
        }
        if (rate - eta * consumed <= tol) return Allocation{powers, rate / consumed};
        eta = rate / consumed;
    }
    throw convergence_error("gee_dinkelbach: no convergence after " +
                            std::to_string(kMaxIterations) + " iterations");
}

Allocation wmee_maxmin(std::span<const double> gains, std::span<const LinkConfig> cfgs,
                       double p_total)
{
    check_links(gains, cfgs, p_total);
    const std::size_t n = gains.size();

    std::vector<double> peak(n);
    std::vector<double> peak_level(n);
    double t_max = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        peak[i] = eepa(gains[i], cfgs[i]);
        peak_level[i] = cfgs[i].weight * ee_of(gains[i], peak[i], cfgs[i]);
        t_max = std::min(t_max, peak_level[i]);
    }

    // Smallest power putting link i at weighted EE level t (rising side of its EE).
    auto min_power = [&](std::size_t i, double t) {
        if (t <= 0.0 || gains[i] == 0.0) return 0.0;
        if (t >= peak_level[i]) return peak[i];
        const auto& c = cfgs[i];
        return bisect([&](double p) { return c.weight * ee_of(gains[i], p, c) - t; }, 0.0,
                      peak[i], 1e-15 * peak[i]);
    };
    auto powers_at = [&](double t) {
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = min_power(i, t);
        return p;
    };
    auto sum = [](const std::vector<double>& p) { return std::accumulate(p.begin(), p.end(), 0.0); };

    std::vector<double> powers = powers_at(t_max);
    if (t_max > 0.0 && sum(powers) > p_total) {
        const double t = bisect([&](double level) { return sum(powers_at(level)) - p_total; }, 0.0,
                                t_max, 1e-14 * t_max);
        powers = powers_at(t);
        const double used = sum(powers);
        if (used > p_total)
            for (auto& p : powers) p *= p_total / used;
    }

    double level = kInf;
    for (std::size_t i = 0; i < n; ++i)
        level = std::min(level, cfgs[i].weight * ee_of(gains[i], powers[i], cfgs[i]));
    return Allocation{std::move(powers), level};
}

Allocation wsee_ascent(std::span<const double> gains, std::span<const LinkConfig> cfgs,
                       double p_total)
{
    check_links(gains, cfgs, p_total);
    const Term term = [&](std::size_t i, double p) {
        return cfgs[i].weight * ee_of(gains[i], p, cfgs[i]);
    };
    const auto caps = caps_of(cfgs);
    auto powers = coordinate_ascent(term, ascent_start(gains, cfgs, p_total), caps, p_total);

    double value = 0.0;
    for (std::size_t i = 0; i < powers.size(); ++i) value += term(i, powers[i]);
    return Allocation{std::move(powers), value};
}

Allocation wpee_ascent(std::span<const double> gains, std::span<const LinkConfig> cfgs,
                       double p_total)
{
    check_links(gains, cfgs, p_total);
    if (std::any_of(gains.begin(), gains.end(), [](double g) { return g == 0.0; }))
        throw infeasible_error("WPEE is identically zero when a link has zero gain");

    const Term term = [&](std::size_t i, double p) {
        const double v = cfgs[i].weight * ee_of(gains[i], p, cfgs[i]);
        return v > 0.0 ? std::log(v) : -kInf;
    };
    const auto caps = caps_of(cfgs);
    auto powers = coordinate_ascent(term, ascent_start(gains, cfgs, p_total), caps, p_total);

    double value = 1.0;
    for (std::size_t i = 0; i < powers.size(); ++i)
        value *= cfgs[i].weight * ee_of(gains[i], powers[i], cfgs[i]);
    return Allocation{std::move(powers), value};
}

} // namespace eese
