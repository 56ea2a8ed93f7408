#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cli_commands.hpp"
#include "pulselink/io.hpp"

namespace {

using pulselink::LinkConfig;
using pulselink::SyncMode;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) out.push_back(std::stod(item));
    return out;
}

std::vector<std::int64_t> parse_ints(const std::string& s) {
    std::vector<std::int64_t> out;
    for (const auto& item : split_list(s)) out.push_back(std::stoll(item));
    return out;
}

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::string snr_list, np_list, m_list, sync_list;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
    auto* opt = cmd->add_option("--config", args.config_path,
                                "link config JSON (strict schema)");
    if (config_required) opt->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "override master_seed");
    cmd->add_option("--snr", args.snr_list, "comma list of SNR dB values");
    cmd->add_option("--np", args.np_list, "comma list of n_p values");
    cmd->add_option("--m", args.m_list, "comma list of averaging constants");
    cmd->add_option("--sync", args.sync_list,
                    "comma list of sync modes: ideal,mpa,mma");
}

LinkConfig load_config(const CommonArgs& args) {
    LinkConfig cfg;
    if (!args.config_path.empty())
        cfg = pulselink::io::load_link_config(args.config_path);
    if (args.seed) cfg.master_seed = *args.seed;
    cfg.check();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pulselink: covert low-SNR pulse-train link simulator"};
    app.require_subcommand(1);

    CommonArgs design_args, analyze_args, run_args, sweep_args, demo_args,
        theory_args;
    std::uint64_t demo_updates = 320;

    auto* design = app.add_subcommand("design", "build and dump the shaping pair");
    add_common(design, design_args, true);
    auto* analyze = app.add_subcommand(
        "analyze", "PAPR/TBP/kurtosis metrics, fig5.csv, quantile pairs");
    add_common(analyze, analyze_args, true);
    auto* run = app.add_subcommand("run", "single BER measurement");
    add_common(run, run_args, true);
    auto* sweep = app.add_subcommand("sweep", "BER grid -> fig8.csv");
    add_common(sweep, sweep_args, true);
    auto* demo = app.add_subcommand("sync-demo", "bin time series -> fig7_bins.csv");
    add_common(demo, demo_args, true);
    demo->add_option("--updates", demo_updates, "number of sync updates to dump");
    auto* theory = app.add_subcommand("theory", "SNR limit curves -> fig6.csv");
    add_common(theory, theory_args, false);
    std::string ber_list;
    theory->add_option("--ber", ber_list, "comma list of BER targets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (design->parsed())
            return pulselink::cli::cmd_design(load_config(design_args),
                                              design_args.out_dir);
        if (analyze->parsed()) {
            auto grid = analyze_args.np_list.empty()
                            ? std::vector<std::int64_t>{32, 64, 128, 256, 512}
                            : parse_ints(analyze_args.np_list);
            return pulselink::cli::cmd_analyze(load_config(analyze_args),
                                               analyze_args.out_dir, grid);
        }
        if (run->parsed())
            return pulselink::cli::cmd_run(load_config(run_args), run_args.out_dir);
        if (sweep->parsed()) {
            const LinkConfig base = load_config(sweep_args);
            pulselink::cli::SweepAxes axes;
            axes.snr_db = sweep_args.snr_list.empty()
                              ? std::vector<double>{base.snr_db}
                              : parse_doubles(sweep_args.snr_list);
            axes.n_p = sweep_args.np_list.empty()
                           ? std::vector<std::int64_t>{base.n_p}
                           : parse_ints(sweep_args.np_list);
            axes.m = sweep_args.m_list.empty() ? std::vector<double>{base.m}
                                               : parse_doubles(sweep_args.m_list);
            if (sweep_args.sync_list.empty()) {
                axes.sync = {base.sync_mode};
            } else {
                for (const auto& name : split_list(sweep_args.sync_list))
                    axes.sync.push_back(pulselink::sync_mode_from_string(name));
            }
            return pulselink::cli::cmd_sweep(base, sweep_args.out_dir, axes);
        }
        if (demo->parsed())
            return pulselink::cli::cmd_sync_demo(load_config(demo_args),
                                                 demo_args.out_dir, demo_updates);
        if (theory->parsed()) {
            auto np_grid =
                theory_args.np_list.empty()
                    ? std::vector<std::int64_t>{16, 32, 64, 128, 256, 512, 1024, 2048}
                    : parse_ints(theory_args.np_list);
            auto ber_grid = ber_list.empty()
                                ? std::vector<double>{1e-2, 1e-3, 1e-4, 1e-5}
                                : parse_doubles(ber_list);
            return pulselink::cli::cmd_theory(theory_args.out_dir, np_grid,
                                              ber_grid);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
