#include "eese/oracle.hpp"

#include "eese/errors.hpp"
#include "eese/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace eese {

namespace {

constexpr double kMaxGridPoints = 1e8;

bool shared_config(Objective objective, std::size_t n_gains, std::size_t n_cfgs)
{
    return (objective == Objective::gee || objective == Objective::sumrate) && n_cfgs == 1 &&
           n_gains > 1;
}

void check_instance(Objective objective, std::span<const double> gains,
                    std::span<const LinkConfig> cfgs)
{
    if (gains.empty()) throw std::invalid_argument("oracle: no dimensions");
    if (gains.size() > 3) throw std::invalid_argument("oracle: at most 3 dimensions");
    if (objective == Objective::ee_siso && gains.size() != 1)
        throw std::invalid_argument("oracle: ee_siso is one-dimensional");
    if (cfgs.size() != gains.size() && !shared_config(objective, gains.size(), cfgs.size()))
        throw std::invalid_argument("oracle: configuration count does not match gains");
    for (const auto& c : cfgs) c.validate();
}

// Strictly better: higher value, or equal value and lexicographically smaller powers.
bool better(double value, const std::vector<double>& powers, double best_value,
            const std::vector<double>& best_powers)
{
    if (value != best_value) return value > best_value;
    return std::lexicographical_compare(powers.begin(), powers.end(), best_powers.begin(),
                                        best_powers.end());
}

} // namespace

std::string_view to_string(Objective objective)
{
    switch (objective) {
    case Objective::ee_siso: return "ee_siso";
    case Objective::gee: return "gee";
    case Objective::wsee: return "wsee";
    case Objective::wpee: return "wpee";
    case Objective::wmee: return "wmee";
    case Objective::sumrate: return "sumrate";
    }
    return "unknown";
}

Objective parse_objective(std::string_view text)
{
    for (auto o : {Objective::ee_siso, Objective::gee, Objective::wsee, Objective::wpee,
                   Objective::wmee, Objective::sumrate})
        if (to_string(o) == text) return o;
    throw std::invalid_argument("unknown objective '" + std::string(text) + "'");
}

double GridSpec::point(std::size_t k) const
{
    return k + 1 == steps ? p_max : p_min + static_cast<double>(k) * step();
}

double objective_value(Objective objective, std::span<const double> gains,
                       std::span<const LinkConfig> cfgs, std::span<const double> powers)
{
    if (powers.size() != gains.size())
        throw std::invalid_argument("objective_value: power count does not match gains");

    if (objective == Objective::sumrate) {
        double rate = 0.0;
        for (std::size_t i = 0; i < gains.size(); ++i) rate += se_of(gains[i], powers[i]);
        return rate;
    }
    if (objective == Objective::gee && shared_config(objective, gains.size(), cfgs.size())) {
        double rate = 0.0;
        double consumed = cfgs[0].pc;
        for (std::size_t i = 0; i < gains.size(); ++i) {
            rate += se_of(gains[i], powers[i]);
            consumed += powers[i];
        }
        return rate / consumed;
    }

    const MultiLinkReport r = evaluate(gains, cfgs, powers);
    switch (objective) {
    case Objective::ee_siso: return r.per_link_ee.front();
    case Objective::gee: return r.gee;
    case Objective::wsee: return r.wsee;
    case Objective::wpee: return r.wpee;
    case Objective::wmee: return r.wmee;
    case Objective::sumrate: break;
    }
    return r.gee;
}

Allocation grid_argmax(Objective objective, std::span<const double> gains,
                       std::span<const LinkConfig> cfgs, const GridSpec& grid,
                       std::optional<double> budget, std::size_t partitions)
{
    check_instance(objective, gains, cfgs);
    if (!(grid.p_min >= 0.0) || !(grid.p_max > grid.p_min) || grid.steps < 2)
        throw std::invalid_argument("oracle: need 0 <= p_min < p_max and steps >= 2");
    const std::size_t dims = gains.size();
    if (std::pow(static_cast<double>(grid.steps), static_cast<double>(dims)) > kMaxGridPoints)
        throw std::invalid_argument("oracle: grid exceeds 1e8 points");
    partitions = std::clamp<std::size_t>(partitions, 1, grid.steps);

    // Budget filter with a relative slack for points that sit on the budget
    // up to rounding of the grid coordinates.
    const double limit = budget ? *budget * (1.0 + 1e-12) : std::numeric_limits<double>::infinity();

    struct Best {
        double value = -std::numeric_limits<double>::infinity();
        std::vector<double> powers;
    };

    auto search_chunk = [&](std::size_t outer_begin, std::size_t outer_end) {
        Best best;
        std::vector<std::size_t> idx(dims, 0);
        idx[0] = outer_begin;
        std::vector<double> p(dims);
        while (idx[0] < outer_end) {
            for (std::size_t d = 0; d < dims; ++d) p[d] = grid.point(idx[d]);
            if (std::accumulate(p.begin(), p.end(), 0.0) <= limit) {
                const double v = objective_value(objective, gains, cfgs, p);
                if (best.powers.empty() || better(v, p, best.value, best.powers)) {
                    best.value = v;
                    best.powers = p;
                }
            }
            // Odometer increment, last dimension fastest.
            std::size_t d = dims;
            while (d-- > 0) {
                if (++idx[d] < (d == 0 ? outer_end : grid.steps)) break;
                if (d == 0) break;
                idx[d] = 0;
            }
        }
        return best;
    };

    Best best;
    const std::size_t chunk = (grid.steps + partitions - 1) / partitions;
    for (std::size_t begin = 0; begin < grid.steps; begin += chunk) {
        Best part = search_chunk(begin, std::min(grid.steps, begin + chunk));
        if (part.powers.empty()) continue;
        if (best.powers.empty() || better(part.value, part.powers, best.value, best.powers))
            best = std::move(part);
    }

    if (best.powers.empty()) throw infeasible_error("oracle: no grid point satisfies the budget");
    return Allocation{std::move(best.powers), best.value};
}

double grid_slack(Objective objective, std::span<const double> gains,
                  std::span<const LinkConfig> cfgs, const GridSpec& grid)
{
    check_instance(objective, gains, cfgs);
    const double h = grid.step();
    const std::size_t n = gains.size();

    // |d/dp ln(1+gp)/(pc+p)| <= g/pc for p >= 0.
    auto ee_lip = [&](std::size_t i) { return gains[i] / cfgs[i].pc; };

    double slack = 0.0;
    switch (objective) {
    case Objective::ee_siso:
        slack = ee_lip(0) * h;
        break;
    case Objective::sumrate:
        for (double g : gains) slack += g * h;
        break;
    case Objective::gee: {
        // dGEE/dp_i = (g_i/(1+g_i p_i) - GEE)/D, with GEE <= max g and D >= sum pc.
        double pc_total = 0.0;
        if (shared_config(objective, n, cfgs.size()))
            pc_total = cfgs[0].pc;
        else
            for (const auto& c : cfgs) pc_total += c.pc;
        const double g_max = *std::max_element(gains.begin(), gains.end());
        slack = static_cast<double>(n) * 2.0 * g_max / pc_total * h;
        break;
    }
    case Objective::wsee:
        for (std::size_t i = 0; i < n; ++i) slack += cfgs[i].weight * ee_lip(i) * h;
        break;
    case Objective::wmee: {
        double l = 0.0;
        for (std::size_t i = 0; i < n; ++i) l = std::max(l, cfgs[i].weight * ee_lip(i));
        slack = l * h;
        break;
    }
    case Objective::wpee: {
        // Each factor is bounded by its peak weighted EE.
        std::vector<double> peak(n);
        for (std::size_t i = 0; i < n; ++i)
            peak[i] = cfgs[i].weight * ee_of(gains[i], eepa(gains[i], cfgs[i]), cfgs[i]);
        for (std::size_t i = 0; i < n; ++i) {
            double others = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) others *= peak[j];
            slack += others * cfgs[i].weight * ee_lip(i) * h;
        }
        break;
    }
    }
    return slack;
}

} // namespace eese
