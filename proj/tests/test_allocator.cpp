#include "support/reference.hpp"

#include "eese/allocator.hpp"
#include "eese/channel.hpp"
#include "eese/errors.hpp"
#include "eese/numerics.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

using namespace eese;

namespace {

constexpr double kE1 = std::numbers::e - 1.0;

LinkConfig link(double pc, double weight = 1.0)
{
    return LinkConfig{pc, std::nullopt, weight};
}

double total(const std::vector<double>& p)
{
    return std::accumulate(p.begin(), p.end(), 0.0);
}

double ee_sum(const std::vector<double>& g, const std::vector<LinkConfig>& c, const std::vector<double>& p)
{
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += c[i].weight * ref::ee(g[i], p[i], c[i].pc);
    return s;
}

double ee_product(const std::vector<double>& g, const std::vector<LinkConfig>& c, const std::vector<double>& p)
{
    double s = 1.0;
    for (std::size_t i = 0; i < g.size(); ++i) s *= c[i].weight * ref::ee(g[i], p[i], c[i].pc);
    return s;
}

double ee_min(const std::vector<double>& g, const std::vector<LinkConfig>& c, const std::vector<double>& p)
{
    double s = INFINITY;
    for (std::size_t i = 0; i < g.size(); ++i) s = std::min(s, c[i].weight * ref::ee(g[i], p[i], c[i].pc));
    return s;
}

} // namespace

TEST_CASE("se_of and ee_of")
{
    CHECK(se_of(1.0, 0.0) == 0.0);
    CHECK(se_of(1.0, kE1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(se_of(2.0, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(ee_of(1.0, 0.0, link(1.0)) == 0.0);
    CHECK(ee_of(1.0, kE1, link(1.0)) == doctest::Approx(1.0 / std::numbers::e).epsilon(1e-15));
}

TEST_CASE("ee_of grid maximum sits at e - 1")
{
    const double best = ref::grid_argmax([](double p) { return ref::ee(1.0, p, 1.0); }, 0.0, 20.0, 1e-4);
    CHECK(std::abs(best - 1.7183) < 1e-12);
    CHECK(std::abs(eepa(1.0, 1.0) - best) <= 1e-4);
}

TEST_CASE("eepa reference values")
{
    CHECK(eepa(1.0, 1.0) == doctest::Approx(kE1).epsilon(1e-14));
    CHECK(eepa(2.0, 0.5) == doctest::Approx(kE1 / 2.0).epsilon(1e-14));
    CHECK(eepa(1.0, LinkConfig{1.0, 1.0, 1.0}) == 1.0);
    CHECK(eepa(0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(eepa(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(eepa(1.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(eepa(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("LinkConfig validation")
{
    CHECK_NOTHROW(link(1.0).validate());
    CHECK_THROWS_AS(link(0.0).validate(), std::domain_error);
    CHECK_THROWS_AS(link(1.0, 0.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS((LinkConfig{1.0, 0.0, 1.0}).validate(), std::invalid_argument);
}

TEST_CASE("eepa satisfies the first-order condition")
{
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        const double product = std::pow(10.0, rng.uniform(-3.0, 3.0));
        const double gamma = std::pow(10.0, rng.uniform(-2.0, 2.0));
        const double pc = product / gamma;
        const double p = eepa(gamma, pc);
        const double lhs = gamma * (pc + p);
        const double rhs = (1.0 + gamma * p) * std::log1p(gamma * p);
        CHECK(std::abs(lhs - rhs) <= 1e-8 * lhs);
    }
}

TEST_CASE("eepa vanishes with the circuit power")
{
    // For small pc the optimum behaves like sqrt(2 pc / gamma).
    for (double gamma : {1e4, 1e6}) CHECK(eepa(gamma, 1e-9) < 1e-6);
    for (double gamma : {0.5, 1.0, 10.0}) {
        const double pc = 1e-9;
        CHECK(eepa(gamma, pc) == doctest::Approx(std::sqrt(2.0 * pc / gamma)).epsilon(1e-3));
    }
    double prev = INFINITY;
    for (double pc : {1e-1, 1e-3, 1e-5, 1e-7, 1e-9}) {
        const double p = eepa(1.0, pc);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("ee_of rises to eepa and falls after it")
{
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        const double gamma = std::pow(10.0, rng.uniform(-2.0, 2.0));
        const double pc = std::pow(10.0, rng.uniform(-1.0, 1.0));
        const LinkConfig cfg = link(pc);
        const double star = eepa(gamma, cfg);
        double prev = -1.0;
        for (int k = 0; k <= 500; ++k) {
            const double v = ee_of(gamma, star * k / 500.0, cfg);
            CHECK(v > prev);
            prev = v;
        }
        const double hi = 10.0 * star + 10.0;
        prev = INFINITY;
        for (int k = 0; k <= 500; ++k) {
            const double v = ee_of(gamma, star + (hi - star) * k / 500.0, cfg);
            // Within a few ulps of the peak the values are flat.
            if (k > 5) CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("eepa scale covariance")
{
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        const double gamma = std::pow(10.0, rng.uniform(-2.0, 2.0));
        const double pc = std::pow(10.0, rng.uniform(-1.0, 1.0));
        const double c = std::pow(10.0, rng.uniform(-2.0, 2.0));
        CHECK(eepa(c * gamma, pc / c) * c == doctest::Approx(eepa(gamma, pc)).epsilon(1e-11));
    }
}

TEST_CASE("wpa reference allocations")
{
    const std::vector<double> g11{1.0, 1.0};
    const auto a = wpa(g11, 1.0);
    CHECK(a.powers[0] == doctest::Approx(1.0));
    CHECK(a.powers[1] == doctest::Approx(1.0));

    const std::vector<double> g12{1.0, 2.0};
    const auto b = wpa(g12, 0.25);
    CHECK(std::abs(b.powers[0]) < 1e-9);
    CHECK(b.powers[1] == doctest::Approx(0.5).epsilon(1e-9));

    const std::vector<double> g3{0.5, 1.0, 2.0};
    const auto c = wpa(g3, 1.0);
    // Grid optimum of the sum rate with p3 = 3 - p1 - p2, step 1e-3: (0.167, 1.166, 1.667).
    const double grid_opt[] = {0.167, 1.166, 1.667};
    for (int i = 0; i < 3; ++i) CHECK(std::abs(c.powers[i] - grid_opt[i]) <= 1e-3 + 1e-12);
    const double exact[] = {1.0 / 6.0, 7.0 / 6.0, 5.0 / 3.0};
    for (int i = 0; i < 3; ++i) CHECK(c.powers[i] == doctest::Approx(exact[i]).epsilon(1e-9));
    CHECK(c.objective == doctest::Approx(std::log(1.0 + 0.5 / 6.0) + std::log(1.0 + 7.0 / 6.0) +
                                         std::log(1.0 + 10.0 / 3.0)));
}

TEST_CASE("wpa sum-rate grid oracle in three dimensions")
{
    // Exhaustive search on p1, p2 with p3 fixed by the budget.
    const std::vector<double> g{0.5, 1.0, 2.0};
    double best = -1.0, b1 = 0.0, b2 = 0.0;
    for (int i = 0; i <= 3000; ++i)
        for (int j = 0; i + j <= 3000; ++j) {
            const double p1 = i * 1e-3, p2 = j * 1e-3, p3 = 3.0 - p1 - p2;
            const double v = std::log1p(0.5 * p1) + std::log1p(p2) + std::log1p(2.0 * p3);
            if (v > best) {
                best = v;
                b1 = p1;
                b2 = p2;
            }
        }
    const auto c = wpa(g, 1.0);
    CHECK(std::abs(c.powers[0] - b1) <= 1e-3);
    CHECK(std::abs(c.powers[1] - b2) <= 1e-3);
    CHECK(c.objective >= best - 1e-12);
}

TEST_CASE("wpa budget and cutoff")
{
    Rng rng(4);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> g(8);
        for (auto& x : g) x = rng.exponential(1.0);
        const double p_avg = rng.uniform(0.01, 3.0);
        const auto a = wpa(g, p_avg);
        CHECK(total(a.powers) == doctest::Approx(p_avg * 8).epsilon(1e-9));
        const double mu = water_level(g, p_avg * 8);
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (g[k] <= 1.0 / mu) CHECK(a.powers[k] == 0.0);
            else CHECK(a.powers[k] > 0.0);
        }
    }
    const std::vector<double> zeros{0.0, 0.0};
    CHECK_THROWS_AS(wpa(zeros, 1.0), infeasible_error);
    const std::vector<double> one_dead{0.0, 2.0};
    CHECK(wpa(one_dead, 1.0).powers == std::vector<double>{0.0, 2.0});
}

TEST_CASE("gee_dinkelbach reduces to eepa in one dimension")
{
    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
        const double gamma = std::pow(10.0, rng.uniform(-2.0, 2.0));
        const double pc = std::pow(10.0, rng.uniform(-1.0, 1.0));
        const auto a = gee_dinkelbach({{gamma}, pc, std::nullopt});
        CHECK(std::abs(a.powers[0] - eepa(gamma, pc)) <= 1e-8 * std::max(1.0, eepa(gamma, pc)));
        CHECK(a.objective == doctest::Approx(ee_of(gamma, a.powers[0], link(pc))).epsilon(1e-12));
    }
    CHECK(gee_dinkelbach({{1.0}, 1.0, std::nullopt}).powers[0] == doctest::Approx(kE1).epsilon(1e-10));
}

TEST_CASE("gee_dinkelbach with equal gains matches the symmetric closed form")
{
    const double gamma = 1.5, pc = 2.0;
    const std::size_t n = 4;
    const double closed = std::expm1(1.0 + lambert_w0((gamma * pc / n - 1.0) / std::numbers::e)) / gamma;
    CHECK(closed == doctest::Approx(0.970073336845523).epsilon(1e-14));
    // Same value from a 1-D grid on N ln(1 + gamma p) / (pc + N p).
    const double grid = ref::grid_argmax(
        [&](double p) { return n * std::log1p(gamma * p) / (pc + n * p); }, 0.0, 5.0, 1e-5);
    CHECK(std::abs(grid - 0.97007) < 1e-12);

    const auto a = gee_dinkelbach({std::vector<double>(n, gamma), pc, std::nullopt});
    for (double p : a.powers) CHECK(std::abs(p - closed) <= 1e-8);
}

TEST_CASE("gee_dinkelbach two-dimensional oracle instance")
{
    // 2-D grid of GEE with step 1e-3 on [0, 3]^2: argmax (0.652, 1.152), value 0.605249832652.
    const auto a = gee_dinkelbach({{1.0, 2.0}, 1.0, std::nullopt});
    CHECK(std::abs(a.powers[0] - 0.652) <= 2e-3);
    CHECK(std::abs(a.powers[1] - 1.152) <= 2e-3);
    CHECK(a.objective >= 0.605249832652 - 1e-12);
    // Stationarity: every active channel sits on the water level 1/eta.
    CHECK(a.powers[1] - a.powers[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(1.0 / a.objective == doctest::Approx(a.powers[0] + 1.0).epsilon(1e-9));
}

TEST_CASE("gee_dinkelbach honours the total power cap")
{
    const auto free = gee_dinkelbach({{1.0, 2.0}, 1.0, std::nullopt});
    const auto capped = gee_dinkelbach({{1.0, 2.0}, 1.0, 1.0});
    CHECK(total(capped.powers) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(capped.objective < free.objective);
    // Under a binding cap the best split is the water-filling split.
    const auto wf = wpa(std::vector<double>{1.0, 2.0}, 0.5);
    CHECK(capped.powers[0] == doctest::Approx(wf.powers[0]).epsilon(1e-9));
    CHECK(capped.powers[1] == doctest::Approx(wf.powers[1]).epsilon(1e-9));

    const auto loose = gee_dinkelbach({{1.0, 2.0}, 1.0, 100.0});
    CHECK(loose.powers[0] == doctest::Approx(free.powers[0]).epsilon(1e-9));
}

TEST_CASE("gee_dinkelbach input checks")
{
    CHECK_THROWS_AS(gee_dinkelbach({{0.0, 0.0}, 1.0, std::nullopt}), infeasible_error);
    CHECK_THROWS_AS(gee_dinkelbach({{1.0}, 0.0, std::nullopt}), std::domain_error);
    CHECK_THROWS_AS(gee_dinkelbach({{1.0}, 1.0, std::nullopt}, 0.0), std::invalid_argument);
    const auto a = gee_dinkelbach({{0.0, 1.0}, 1.0, std::nullopt});
    CHECK(a.powers[0] == 0.0);
    CHECK(a.powers[1] == doctest::Approx(kE1).epsilon(1e-9));
}

TEST_CASE("wmee_maxmin reference instances")
{
    const std::vector<double> g{1.0, 1.0};
    const std::vector<LinkConfig> c{link(1.0), link(1.0)};
    const auto ample = wmee_maxmin(g, c, 100.0);
    for (double p : ample.powers) CHECK(p == doctest::Approx(kE1).epsilon(1e-8));
    CHECK(ample.objective == doctest::Approx(1.0 / std::numbers::e).epsilon(1e-10));

    const auto tight = wmee_maxmin(g, c, 1.0);
    CHECK(tight.powers[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(tight.powers[1] == doctest::Approx(0.5).epsilon(1e-9));

    // 2-D grid, step 1e-3, sum <= 2: best min-EE 0.229777511321 at (1.848, 0.152).
    const std::vector<double> g2{0.5, 2.0};
    const auto a = wmee_maxmin(g2, c, 2.0);
    CHECK(a.objective >= 0.229777511321 - 1e-2);
    CHECK(a.objective >= 0.229777511321 - 1e-9);
    CHECK(std::abs(a.powers[0] - 1.848) < 2e-3);
    CHECK(std::abs(a.powers[1] - 0.152) < 2e-3);
    CHECK(a.objective == doctest::Approx(ee_min(g2, c, a.powers)).epsilon(1e-12));
}

TEST_CASE("wmee_maxmin equalizes weighted EE when the budget binds")
{
    Rng rng(15);
    int binding = 0;
    for (int i = 0; i < 60; ++i) {
        const std::size_t n = 2 + i % 3;
        std::vector<double> g(n);
        std::vector<LinkConfig> c(n);
        for (std::size_t k = 0; k < n; ++k) {
            g[k] = rng.exponential(1.0) + 1e-3;
            c[k] = link(rng.uniform(0.25, 2.0), rng.uniform(0.5, 2.0));
        }
        const double budget = rng.uniform(0.1, 3.0);
        const auto a = wmee_maxmin(g, c, budget);
        CHECK(total(a.powers) <= budget * (1.0 + 1e-12));
        if (total(a.powers) < budget * (1.0 - 1e-9)) continue;
        ++binding;
        double lo = INFINITY, hi = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double v = c[k].weight * ref::ee(g[k], a.powers[k], c[k].pc);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK((hi - lo) <= 1e-6 * hi);
    }
    CHECK(binding > 20);
}

TEST_CASE("wsee and wpee separate under an ample budget")
{
    Rng rng(21);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> g(3);
        std::vector<LinkConfig> c(3);
        for (std::size_t k = 0; k < 3; ++k) {
            g[k] = rng.exponential(1.0) + 0.05;
            c[k] = link(rng.uniform(0.25, 2.0), rng.uniform(0.5, 2.0));
        }
        const auto s = wsee_ascent(g, c, 1e6);
        const auto p = wpee_ascent(g, c, 1e6);
        for (std::size_t k = 0; k < 3; ++k) {
            const double star = eepa(g[k], c[k]);
            CHECK(std::abs(s.powers[k] - star) <= 1e-4 * std::max(1.0, star));
            CHECK(std::abs(p.powers[k] - star) <= 1e-4 * std::max(1.0, star));
        }
    }
}

TEST_CASE("wsee and wpee with a single link")
{
    const std::vector<double> g{3.0};
    const std::vector<LinkConfig> c{link(0.7)};
    CHECK(wsee_ascent(g, c, 100.0).powers[0] == doctest::Approx(eepa(3.0, 0.7)).epsilon(1e-6));
    CHECK(wpee_ascent(g, c, 100.0).powers[0] == doctest::Approx(eepa(3.0, 0.7)).epsilon(1e-6));
    // Budget below the EE optimum: the whole budget is used.
    CHECK(wsee_ascent(g, c, 0.1).powers[0] == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("wsee and wpee against the two-dimensional grid")
{
    // Grid step 1e-2 with p1 + p2 <= 1.
    const std::vector<double> g{1.0, 2.0};
    const std::vector<LinkConfig> c{link(1.0), link(0.5)};
    const auto s = wsee_ascent(g, c, 1.0);
    CHECK(s.objective >= 0.96386370241 - 1e-3);
    CHECK(s.objective == doctest::Approx(ee_sum(g, c, s.powers)).epsilon(1e-12));
    CHECK(total(s.powers) <= 1.0 + 1e-12);

    const auto p = wpee_ascent(g, c, 1.0);
    CHECK(p.objective >= 0.1919281607 - 1e-3);
    CHECK(p.objective == doctest::Approx(ee_product(g, c, p.powers)).epsilon(1e-12));
    CHECK(total(p.powers) <= 1.0 + 1e-12);
}

TEST_CASE("wpee rejects a dead link")
{
    const std::vector<double> g{0.0, 1.0};
    const std::vector<LinkConfig> c{link(1.0), link(1.0)};
    CHECK_THROWS_AS(wpee_ascent(g, c, 1.0), infeasible_error);
    CHECK_NOTHROW(wsee_ascent(g, c, 1.0));
}

TEST_CASE("multi-link input checks")
{
    const std::vector<double> g{1.0, 1.0};
    const std::vector<LinkConfig> one{link(1.0)};
    const std::vector<LinkConfig> two{link(1.0), link(1.0)};
    CHECK_THROWS_AS(wmee_maxmin(g, one, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(wsee_ascent(g, two, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(wpee_ascent(g, two, -1.0), std::invalid_argument);
}
