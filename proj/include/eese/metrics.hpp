#pragma once

#include "eese/allocator.hpp"

#include <span>
#include <vector>

namespace eese {

struct EeSePoint {
    double se = 0.0; ///< nats/s/Hz
    double ee = 0.0; ///< nats/J
};

struct MultiLinkReport {
    std::vector<double> per_link_ee;
    double gee = 0.0;
    double wsee = 0.0;
    double wpee = 0.0;
    double wmee = 0.0;
    double jain = 1.0;
};

/// Jain's index (sum x)^2 / (N sum x^2); 1 for an all-zero vector.
double jain_index(std::span<const double> values);

/// All four multi-link EE figures plus Jain fairness of the per-link EEs.
MultiLinkReport evaluate(std::span<const double> gains, std::span<const LinkConfig> cfgs,
                         std::span<const double> powers);

/// (SE, EE) at the EE-optimal power for each gamma in the grid, in grid order.
std::vector<EeSePoint> trace_ee_se(const LinkConfig& cfg, std::span<const double> gamma_grid);

} // namespace eese
