#include "eese/cli.hpp"

#include "eese/allocator.hpp"
#include "eese/channel.hpp"
#include "eese/config.hpp"
#include "eese/errors.hpp"
#include "eese/experiments.hpp"
#include "eese/oracle.hpp"
#include "eese/report.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

namespace eese {

namespace {

struct ExperimentCommand {
    Experiment experiment;
    const char* description;
};

constexpr ExperimentCommand kCommands[] = {
    {Experiment::siso_profiles, "EEPA vs water-filling power, SE and EE over the channel gain"},
    {Experiment::siso_ee_se, "parametric (SE, EE) curve of EEPA, one file per circuit power"},
    {Experiment::pc_sweep, "EE-SE curves per circuit power plus matched-SE EE ratios"},
    {Experiment::ofdm_scaling, "mean GEE and SE versus number of subcarriers"},
    {Experiment::mimo_scaling, "mean GEE and SE versus antennas (N x N, SVD eigen-channels)"},
    {Experiment::fairness, "Jain index of per-link EE under GEE/WSEE/WPEE/WMEE"},
    {Experiment::table1, "EE and SE gains of OFDM and MIMO over SISO at pc = 1 W"},
};

// Raw flag text, parsed with the config-file rules so both layers agree.
struct FlagText {
    std::map<std::string, std::string> values;
    std::string config;
    bool record_time = false;
};

void add_run_options(CLI::App& cmd, FlagText& flags)
{
    const std::pair<const char*, const char*> options[] = {
        {"pc", "circuit power values, comma separated (W)"},
        {"n", "dimension values, comma separated"},
        {"trials", "Monte-Carlo trials"},
        {"seed", "64-bit run seed"},
        {"budget", "power budget (W)"},
        {"units", "nats or bits"},
        {"out", "output directory"},
        {"fading", "rayleigh or deterministic"},
        {"mean_gain", "mean channel gain"},
        {"gamma_min", "lowest gain of the gamma grid"},
        {"gamma_max", "highest gain of the gamma grid"},
        {"gamma_points", "points of the gamma grid"},
    };
    for (const auto& [key, help] : options) {
        std::string flag = "--" + std::string(key);
        std::replace(flag.begin(), flag.end(), '_', '-');
        cmd.add_option_function<std::string>(
            flag, [&flags, k = std::string(key)](const std::string& v) { flags.values[k] = v; }, help);
    }
    cmd.add_option("--config", flags.config, "key=value config file");
    cmd.add_flag("--record-time", flags.record_time, "add wall time to the manifest");
}

RunSettings settings_from(const FlagText& flags)
{
    RunSettings settings;
    if (!flags.config.empty()) settings = load_config(flags.config);
    RunSettings over;
    for (const auto& [key, value] : flags.values) {
        try {
            over.assign(key, value);
        } catch (const config_error& e) {
            throw config_error("--" + key + ": " + e.what());
        }
    }
    settings.merge(over);
    return settings;
}

int run_experiment(Experiment experiment, const FlagText& flags, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    const RunSettings settings = settings_from(flags);
    const ExperimentSpec spec = resolve_spec(experiment, settings);
    spec.validate();

    const Units units = settings.units.value_or(Units::bits);
    const std::filesystem::path dir = settings.out.value_or(".");

    const auto curves = run(spec);
    RunManifest manifest{std::string(to_string(experiment)), spec, units, write_curves(dir, curves, units), {}};
    if (flags.record_time)
        manifest.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string text = to_text(manifest);
    std::ofstream file(dir / "manifest.txt", std::ios::binary | std::ios::trunc);
    file << text;
    if (!file) throw std::runtime_error("cannot write manifest in '" + dir.string() + "'");

    for (const auto& f : manifest.outputs) out << (dir / f.name).string() << '\n';
    out << (dir / "manifest.txt").string() << '\n';
    return exit_ok;
}

struct VerifyOptions {
    std::string objective;
    std::size_t dims = 2;
    std::uint64_t seed = 1;
    std::size_t instances = 20;
    double budget = 2.0;
};

std::size_t grid_steps(std::size_t dims)
{
    switch (dims) {
    case 1: return 20001;
    case 2: return 1001;
    default: return 101;
    }
}

int run_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err)
{
    const Objective objective = parse_objective(opt.objective);
    if (opt.dims < 1 || opt.dims > 3) throw std::invalid_argument("--dims must be 1, 2 or 3");
    if (objective == Objective::ee_siso && opt.dims != 1)
        throw std::invalid_argument("ee_siso is one-dimensional; use --dims 1");
    if (!(opt.budget > 0.0)) throw std::invalid_argument("--budget must be positive");

    const GridSpec grid{0.0, opt.budget, grid_steps(opt.dims)};
    double worst_shortfall = -std::numeric_limits<double>::infinity();
    double worst_power_dev = 0.0;
    bool ok = true;

    for (std::size_t k = 0; k < opt.instances; ++k) {
        Rng rng(derive_seed(opt.seed, k));
        std::vector<double> gains(opt.dims);
        std::vector<LinkConfig> cfgs(opt.dims);
        for (std::size_t i = 0; i < opt.dims; ++i) {
            gains[i] = rng.exponential(1.0);
            cfgs[i].pc = rng.uniform(0.25, 2.0);
        }

        // The GEE instance uses one shared circuit power (the first link's).
        std::vector<LinkConfig> oracle_cfgs = cfgs;
        if ((objective == Objective::gee || objective == Objective::sumrate) && opt.dims > 1)
            oracle_cfgs = {cfgs.front()};

        std::vector<double> powers;
        switch (objective) {
        case Objective::ee_siso: {
            LinkConfig capped = cfgs[0];
            capped.p_max = opt.budget;
            powers = {eepa(gains[0], capped)};
            break;
        }
        case Objective::gee: powers = gee_dinkelbach({gains, cfgs[0].pc, opt.budget}).powers; break;
        case Objective::wsee: powers = wsee_ascent(gains, cfgs, opt.budget).powers; break;
        case Objective::wpee: powers = wpee_ascent(gains, cfgs, opt.budget).powers; break;
        case Objective::wmee: powers = wmee_maxmin(gains, cfgs, opt.budget).powers; break;
        case Objective::sumrate:
            powers = wpa(gains, opt.budget / static_cast<double>(opt.dims)).powers;
            break;
        }

        const double used = std::accumulate(powers.begin(), powers.end(), 0.0);
        const Allocation best = grid_argmax(objective, gains, oracle_cfgs, grid, opt.budget);
        const double solver_value = objective_value(objective, gains, oracle_cfgs, powers);
        const double slack = grid_slack(objective, gains, oracle_cfgs, grid);
        const double shortfall = best.objective - solver_value;

        double dev = 0.0;
        for (std::size_t i = 0; i < powers.size(); ++i) dev = std::max(dev, std::abs(powers[i] - best.powers[i]));
        worst_power_dev = std::max(worst_power_dev, dev);
        worst_shortfall = std::max(worst_shortfall, shortfall);

        const bool feasible = used <= opt.budget * (1.0 + 1e-9);
        const bool within = shortfall <= slack + 1e-9 * std::max(1.0, std::abs(best.objective));
        if (!feasible || !within) {
            ok = false;
            err << fmt::format("instance {}: solver {:.12g} oracle {:.12g} slack {:.3g} power used {:.12g}\n", k,
                               solver_value, best.objective, slack, used);
        }
    }

    out << fmt::format("objective: {}\ndims: {}\ninstances: {}\ngrid_step: {:.6g}\n", to_string(objective),
                       opt.dims, opt.instances, grid.step());
    out << fmt::format("max_objective_shortfall: {:.6g}\nmax_power_deviation: {:.6g}\nstatus: {}\n",
                       worst_shortfall, worst_power_dev, ok ? "PASS" : "FAIL");
    return ok ? exit_ok : exit_numerical;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Energy-efficient power allocation experiments", "eese"};
    app.require_subcommand(1);

    std::vector<FlagText> flags(std::size(kCommands));
    std::vector<CLI::App*> commands;
    for (std::size_t i = 0; i < std::size(kCommands); ++i) {
        auto* cmd = app.add_subcommand(std::string(to_string(kCommands[i].experiment)), kCommands[i].description);
        add_run_options(*cmd, flags[i]);
        commands.push_back(cmd);
    }

    VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "compare a solver against the grid-search oracle");
    verify_cmd->add_option("--objective", verify.objective, "ee_siso, gee, wsee, wpee, wmee or sumrate")->required();
    verify_cmd->add_option("--dims", verify.dims, "dimensions (1-3)");
    verify_cmd->add_option("--seed", verify.seed, "instance seed");
    verify_cmd->add_option("--trials", verify.instances, "number of random instances");
    verify_cmd->add_option("--budget", verify.budget, "total power budget and grid range (W)");

    std::vector<std::string> argv_store{"eese"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_usage;
    }

    try {
        if (verify_cmd->parsed()) return run_verify(verify, out, err);
        for (std::size_t i = 0; i < commands.size(); ++i)
            if (commands[i]->parsed()) return run_experiment(kCommands[i].experiment, flags[i], out);
    } catch (const config_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const numerical_error& e) {
        err << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const infeasible_error& e) {
        err << "infeasible: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::domain_error& e) {
        err << "domain error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_usage;
}

} // namespace eese
