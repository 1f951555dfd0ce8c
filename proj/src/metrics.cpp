#include "eese/metrics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace eese {

double jain_index(std::span<const double> values)
{
    if (values.empty()) throw std::invalid_argument("jain_index: empty input");
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : values) {
        sum += v;
        sum_sq += v * v;
    }
    if (sum_sq == 0.0) return 1.0;
    return sum * sum / (static_cast<double>(values.size()) * sum_sq);
}

MultiLinkReport evaluate(std::span<const double> gains, std::span<const LinkConfig> cfgs,
                         std::span<const double> powers)
{
    if (gains.size() != cfgs.size() || gains.size() != powers.size())
        throw std::invalid_argument("evaluate: gains, configs and powers differ in length");
    if (gains.empty()) throw std::invalid_argument("evaluate: no links");

    MultiLinkReport r;
    r.per_link_ee.resize(gains.size());
    r.wpee = 1.0;
    r.wmee = std::numeric_limits<double>::infinity();

    double rate = 0.0;
    double consumed = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        if (!(powers[i] >= 0.0)) throw std::invalid_argument("evaluate: negative power");
        const double se = se_of(gains[i], powers[i]);
        const double ee = se / (cfgs[i].pc + powers[i]);
        r.per_link_ee[i] = ee;
        rate += se;
        consumed += cfgs[i].pc + powers[i];
        const double weighted = cfgs[i].weight * ee;
        r.wsee += weighted;
        r.wpee *= weighted;
        r.wmee = std::min(r.wmee, weighted);
    }
    r.gee = rate / consumed;
    r.jain = jain_index(r.per_link_ee);
    return r;
}

std::vector<EeSePoint> trace_ee_se(const LinkConfig& cfg, std::span<const double> gamma_grid)
{
    std::vector<EeSePoint> curve;
    curve.reserve(gamma_grid.size());
    for (double gamma : gamma_grid) {
        if (!(gamma > 0.0)) throw std::invalid_argument("trace_ee_se: gains must be positive");
        const double p = eepa(gamma, cfg);
        curve.push_back({se_of(gamma, p), ee_of(gamma, p, cfg)});
    }
    return curve;
}

} // namespace eese
