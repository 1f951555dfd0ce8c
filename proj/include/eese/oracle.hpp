#pragma once

#include "eese/allocator.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace eese {

enum class Objective { ee_siso, gee, wsee, wpee, wmee, sumrate };

std::string_view to_string(Objective objective);
Objective parse_objective(std::string_view text);

/// Uniform per-dimension power grid: `steps` points from p_min to p_max inclusive.
struct GridSpec {
    double p_min = 0.0;
    double p_max = 1.0;
    std::size_t steps = 101;

    double step() const { return (p_max - p_min) / static_cast<double>(steps - 1); }
    double point(std::size_t k) const;
};

/// Value of `objective` at `powers`.
///
/// gee and sumrate accept either one configuration per gain or a single
/// configuration whose pc is the shared circuit power. wpee is reported as
/// the product of weighted EEs.
double objective_value(Objective objective, std::span<const double> gains,
                       std::span<const LinkConfig> cfgs, std::span<const double> powers);

/// Exhaustive search over the grid (filtered to sum(p) <= budget when given).
/// Ties go to the lexicographically smallest power vector, so the result does
/// not depend on enumeration order or on how the grid is partitioned; the
/// outer dimension is split into `partitions` chunks that are searched
/// independently and merged.
Allocation grid_argmax(Objective objective, std::span<const double> gains,
                       std::span<const LinkConfig> cfgs, const GridSpec& grid,
                       std::optional<double> budget = std::nullopt, std::size_t partitions = 1);

/// Upper bound on how far the grid optimum can fall below the true constrained
/// optimum: sum_i L_i * step, with L_i a Lipschitz bound of the objective in p_i
/// (rounding the true optimum down onto the grid keeps it feasible).
double grid_slack(Objective objective, std::span<const double> gains,
                  std::span<const LinkConfig> cfgs, const GridSpec& grid);

} // namespace eese
