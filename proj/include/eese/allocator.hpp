#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace eese {

/// Per-link power model: circuit power pc (W), optional transmit cap (W), weight.
struct LinkConfig {
    double pc = 1.0;
    std::optional<double> p_max;
    double weight = 1.0;

    void validate() const;
};

struct Allocation {
    std::vector<double> powers; ///< W, one per dimension
    double objective = 0.0;     ///< objective value at `powers`
};

/// Multi-dimension GEE problem with a single circuit power shared by all
/// dimensions (subcarriers or eigen-channels of one device).
struct GeeProblem {
    std::vector<double> gains;
    double pc = 1.0;
    std::optional<double> p_max_total;
};

// Rates are in nats (natural log) throughout; conversion to bits happens at output.

/// ln(1 + gamma * p).
double se_of(double gamma, double p);

/// se_of(gamma, p) / (pc + p).
double ee_of(double gamma, double p, const LinkConfig& cfg);

/// EE-maximizing transmit power, (e^{1 + W0((gamma*pc - 1)/e)} - 1) / gamma,
/// clipped to cfg.p_max. Zero for gamma == 0.
double eepa(double gamma, const LinkConfig& cfg);
double eepa(double gamma, double pc);

/// Water level mu with sum_i max(0, mu - 1/gamma_i) = total_power.
double water_level(std::span<const double> gains, double total_power);

/// Water-filling: p_i = max(0, mu - 1/gamma_i) with mean(p) = p_avg.
/// Objective is the sum rate sum_i ln(1 + gamma_i p_i).
Allocation wpa(std::span<const double> gains, double p_avg);

/// Global EE maximization by Dinkelbach iterations with closed-form inner steps.
/// Objective is the GEE at the returned powers.
Allocation gee_dinkelbach(const GeeProblem& problem, double tol = 1e-12);

/// Max-min weighted EE under sum(p) <= p_total. Objective is min_i w_i EE_i.
Allocation wmee_maxmin(std::span<const double> gains, std::span<const LinkConfig> cfgs,
                       double p_total);

/// Weighted-sum EE under sum(p) <= p_total by projected coordinate ascent.
/// Objective is sum_i w_i EE_i at a stationary point.
Allocation wsee_ascent(std::span<const double> gains, std::span<const LinkConfig> cfgs,
                       double p_total);

/// Weighted-product EE under sum(p) <= p_total (ascent on sum_i log(w_i EE_i)).
/// Objective is prod_i w_i EE_i. Rejects any zero gain with infeasible_error.
Allocation wpee_ascent(std::span<const double> gains, std::span<const LinkConfig> cfgs,
                       double p_total);

} // namespace eese
