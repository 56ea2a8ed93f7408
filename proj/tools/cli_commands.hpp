#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pulselink/link.hpp"

// Command implementations behind the CLI front end, separated so they can be
// driven directly from tests.

namespace pulselink::cli {

struct SweepAxes {
    std::vector<double> snr_db;
    std::vector<std::int64_t> n_p;
    std::vector<double> m;
    std::vector<SyncMode> sync;

    void check() const;  // non-empty, strictly increasing numeric grids
};

// Builds the shaping pair; writes seed_kernel.json, spreading_kernel.json
// and design_diagnostics.csv.
int cmd_design(const LinkConfig& config, const std::filesystem::path& out_dir);

// Renders the configured train; writes metrics.csv, fig5.csv (PAPR vs n_p
// over np_grid), and quantiles.csv (sorted-quantile pairs of the transmit
// waveform against Gaussian quantiles).
int cmd_analyze(const LinkConfig& config, const std::filesystem::path& out_dir,
                const std::vector<std::int64_t>& np_grid);

// Single run_link; writes ber.csv and run_config.json.
int cmd_run(const LinkConfig& config, const std::filesystem::path& out_dir);

// Cartesian product of the axes; one BerRecord row per point in fig8.csv
// (sorted by n_p, sync mode, m, snr) plus sweep_configs.json. Points run
// concurrently with per-point derived seeds. Returns nonzero if any point
// failed; failures are recorded and the sweep continues.
int cmd_sweep(const LinkConfig& base, const std::filesystem::path& out_dir,
              const SweepAxes& axes);

// Runs the sync recursion and dumps every bin after each update to
// fig7_bins.csv.
int cmd_sync_demo(const LinkConfig& config,
                  const std::filesystem::path& out_dir, std::uint64_t updates);

// Writes fig6.csv: snr_limit and Shannon floor (dB) over (n_p, ber) grids.
int cmd_theory(const std::filesystem::path& out_dir,
               const std::vector<std::int64_t>& np_grid,
               const std::vector<double>& ber_grid);

}  // namespace pulselink::cli
