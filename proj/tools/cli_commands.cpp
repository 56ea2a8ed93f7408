#include "cli_commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "pulselink/channel.hpp"
#include "pulselink/errors.hpp"
#include "pulselink/hash.hpp"
#include "pulselink/io.hpp"
#include "pulselink/metrics.hpp"
#include "pulselink/rng.hpp"
#include "pulselink/shaping.hpp"
#include "pulselink/theory.hpp"

namespace pulselink::cli {

namespace fs = std::filesystem;

namespace {

std::string hash_hex(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_metric_rows(const fs::path& path,
                       const std::vector<std::pair<std::string, double>>& rows,
                       std::uint64_t hash, std::uint64_t seed) {
    std::string csv = "metric_name,value,config_hash,seed\n";
    for (const auto& [name, value] : rows)
        csv += io::csv_row({name, io::format_g17(value), hash_hex(hash),
                            std::to_string(seed)});
    io::write_text_file(path, csv);
}

nlohmann::json kernel_meta(const LinkConfig& c) {
    nlohmann::json meta;
    meta["beta"] = c.beta;
    meta["n_s"] = c.n_s;
    meta["K"] = c.k_sections;
    meta["r"] = c.pole_radius;
    meta["eta"] = c.eta;
    return meta;
}

std::vector<int> seeded_bits(std::uint64_t seed, std::size_t n) {
    std::vector<int> bits(n);
    for (std::size_t j = 0; j < n; ++j) bits[j] = rng::bit(seed, j);
    return bits;
}

}  // namespace

void SweepAxes::check() const {
    if (snr_db.empty() || n_p.empty() || m.empty() || sync.empty())
        throw invalid_input("sweep: all axes must be non-empty");
    const auto strictly_increasing = [](const auto& v) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (!(v[i] > v[i - 1])) return false;
        return true;
    };
    if (!strictly_increasing(snr_db))
        throw invalid_input("sweep: snr grid must be strictly increasing");
    if (!strictly_increasing(n_p))
        throw invalid_input("sweep: n_p grid must be strictly increasing");
    if (!strictly_increasing(m))
        throw invalid_input("sweep: m grid must be strictly increasing");
}

int cmd_design(const LinkConfig& config, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    const LinkPlan plan = make_link_plan(config);

    io::write_kernel_json(out_dir / "seed_kernel.json", plan.pair.seed,
                          kernel_meta(config));
    io::write_kernel_json(out_dir / "spreading_kernel.json",
                          plan.pair.spreading, kernel_meta(config));

    const std::size_t canvas =
        std::max(plan.pair.seed.taps.size(), plan.pair.spreading.taps.size());
    const SupportInterval sup{0, static_cast<std::int64_t>(canvas) - 1};
    Waveform wseed, wspread;
    wseed.samples.assign(canvas, 0.0);
    wspread.samples.assign(canvas, 0.0);
    std::copy(plan.pair.seed.taps.begin(), plan.pair.seed.taps.end(),
              wseed.samples.begin());
    std::copy(plan.pair.spreading.taps.begin(), plan.pair.spreading.taps.end(),
              wspread.samples.begin());

    write_metric_rows(
        out_dir / "design_diagnostics.csv",
        {{"papr_seed", papr(wseed, sup)},
         {"papr_spreading", papr(wspread, sup)},
         {"tbp_ratio", tbp_ratio(plan.pair.spreading, plan.pair.seed, sup)},
         {"spectral_deviation_max", plan.pair.spectral_deviation},
         {"spreading_len", static_cast<double>(plan.pair.spreading.taps.size())},
         {"total_delay_samples", static_cast<double>(plan.total_delay)},
         {"receive_noise_gain", plan.noise_gain},
         {"papr_matched_output", plan.papr_measured}},
        plan.hash, config.master_seed);
    io::write_text_file(out_dir / "design_config.json",
                        io::config_to_json(config).dump(2) + "\n");
    return 0;
}

int cmd_analyze(const LinkConfig& config, const fs::path& out_dir,
                const std::vector<std::int64_t>& np_grid) {
    fs::create_directories(out_dir);
    const LinkPlan plan = make_link_plan(config);

    const std::size_t nbits =
        static_cast<std::size_t>(std::min<std::uint64_t>(config.n_bits, 200000));
    const auto bits = seeded_bits(plan.bits_seed, nbits);
    const auto tx = transmit(bits, plan);
    const auto sup_tx =
        train_support(tx.x.samples.size(), plan.pair.spreading.taps.size());

    const PulseTrain train = delta_train_from_bits(
        bits, config.n_p, config.true_offset, config.amplitude);
    const auto seed_render = render_train(train, plan.pair.seed);
    const auto sup_seed =
        train_support(seed_render.samples.size(), plan.pair.seed.taps.size());

    const std::size_t canvas =
        std::max(plan.pair.seed.taps.size(), plan.pair.spreading.taps.size());
    const SupportInterval sup_k{0, static_cast<std::int64_t>(canvas) - 1};

    std::vector<std::pair<std::string, double>> rows = {
        {"papr_transmit", papr(tx.x, sup_tx)},
        {"papr_seed_render", papr(seed_render, sup_seed)},
        {"tbp_ratio", tbp_ratio(plan.pair.spreading, plan.pair.seed, sup_k)},
        {"papr_matched_output", plan.papr_measured},
        {"spectral_deviation_max", plan.pair.spectral_deviation},
        {"receive_noise_gain", plan.noise_gain},
        {"total_delay_samples", static_cast<double>(plan.total_delay)}};
    if (tx.x.samples.size() >= 1000) {
        rows.emplace_back("excess_kurtosis_transmit", excess_kurtosis(tx.x));
        rows.emplace_back("excess_kurtosis_seed_render",
                          excess_kurtosis(seed_render));
    }
    write_metric_rows(out_dir / "metrics.csv", rows, plan.hash,
                      config.master_seed);

    // fig5: measured PAPR of a regular RC train vs the asymptotic model
    std::string fig5 = "n_p,n_s,papr_measured,papr_model,config_hash,seed\n";
    const auto rc = rc_kernel(config.beta, config.n_s, config.half_len_symbols);
    for (const std::int64_t n_p : np_grid) {
        const std::size_t pulses = std::max<std::size_t>(
            256, std::min<std::size_t>(3000, 400000 / static_cast<std::size_t>(n_p)));
        PulseTrain t;
        t.arrivals.resize(pulses);
        t.amplitudes.resize(pulses);
        for (std::size_t j = 0; j < pulses; ++j) {
            t.arrivals[j] = static_cast<std::int64_t>(j) * n_p;
            t.amplitudes[j] = rng::bit(plan.bits_seed, j) ? 1.0 : -1.0;
        }
        t.total_len = t.arrivals.back() + 1;
        const auto x = render_train(t, rc);
        const double measured =
            papr(x, train_support(x.samples.size(), rc.taps.size()));
        std::string model;
        if (static_cast<double>(n_p) / config.n_s >= 8.0)
            model = io::format_g17(theory::papr_model(
                static_cast<double>(n_p), static_cast<double>(config.n_s)));
        fig5 += io::csv_row({std::to_string(n_p), std::to_string(config.n_s),
                             io::format_g17(measured), model,
                             hash_hex(plan.hash),
                             std::to_string(config.master_seed)});
    }
    io::write_text_file(out_dir / "fig5.csv", fig5);

    // sorted-quantile pairs of the transmit waveform vs Gaussian quantiles
    std::vector<double> sorted(tx.x.samples.begin() + sup_tx.start,
                               tx.x.samples.begin() + sup_tx.end + 1);
    std::sort(sorted.begin(), sorted.end());
    double mean = 0.0;
    for (double v : sorted) mean += v;
    mean /= static_cast<double>(sorted.size());
    double var = 0.0;
    for (double v : sorted) var += (v - mean) * (v - mean);
    var /= static_cast<double>(sorted.size());
    const double sd = std::sqrt(var);
    std::string quant = "p,empirical_q,gaussian_q,config_hash,seed\n";
    const std::size_t nq = std::min<std::size_t>(512, sorted.size());
    for (std::size_t k = 0; k < nq; ++k) {
        const double p = (static_cast<double>(k) + 0.5) / static_cast<double>(nq);
        const double emp =
            sorted[static_cast<std::size_t>(p * static_cast<double>(sorted.size()))];
        const double gq = mean - sd * std::numbers::sqrt2 * theory::erfc_inv(2.0 * p);
        quant += io::csv_row({io::format_g17(p), io::format_g17(emp),
                              io::format_g17(gq), hash_hex(plan.hash),
                              std::to_string(config.master_seed)});
    }
    io::write_text_file(out_dir / "quantiles.csv", quant);
    return 0;
}

int cmd_run(const LinkConfig& config, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    const BerRecord rec = run_link(config);
    io::write_text_file(out_dir / "ber.csv",
                        std::string(io::kBerCsvHeader) + io::ber_csv_row(rec));
    io::write_text_file(out_dir / "run_config.json",
                        io::config_to_json(config).dump(2) + "\n");
    return 0;
}

int cmd_sweep(const LinkConfig& base, const fs::path& out_dir,
              const SweepAxes& axes) {
    fs::create_directories(out_dir);
    axes.check();

    std::vector<LinkConfig> points;
    for (const std::int64_t n_p : axes.n_p)
        for (const SyncMode mode : axes.sync)
            for (const double m : axes.m)
                for (const double snr : axes.snr_db) {
                    LinkConfig c = base;
                    c.n_p = n_p;
                    c.sync_mode = mode;
                    c.m = m;
                    c.snr_db = snr;
                    points.push_back(c);
                }

    std::vector<BerRecord> records(points.size());
    std::vector<int> failed(points.size(), 0);
    std::vector<std::string> messages(points.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(points.size()); ++i) {
        try {
            records[static_cast<std::size_t>(i)] =
                run_link(points[static_cast<std::size_t>(i)]);
        } catch (const std::exception& e) {
            failed[static_cast<std::size_t>(i)] = 1;
            messages[static_cast<std::size_t>(i)] = e.what();
        }
    }

    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto key = [&](std::size_t i) {
            return std::make_tuple(records[i].n_p,
                                   std::string(to_string(records[i].sync_mode)),
                                   records[i].m, records[i].snr_target_db);
        };
        return key(a) < key(b);
    });

    std::string csv = io::kBerCsvHeader;
    nlohmann::json configs = nlohmann::json::object();
    int rc = 0;
    for (const std::size_t i : order) {
        if (failed[i]) {
            rc = 1;
            std::fprintf(stderr, "sweep point failed: %s\n", messages[i].c_str());
            continue;
        }
        csv += io::ber_csv_row(records[i]);
        configs[hash_hex(records[i].config_hash)] = io::config_to_json(points[i]);
    }
    io::write_text_file(out_dir / "fig8.csv", csv);
    io::write_text_file(out_dir / "sweep_configs.json", configs.dump(2) + "\n");
    return rc;
}

int cmd_sync_demo(const LinkConfig& config, const fs::path& out_dir,
                  std::uint64_t updates) {
    fs::create_directories(out_dir);
    const auto rows = run_sync_demo(config, updates);
    const std::uint64_t hash = config_hash(config);
    std::string csv = "update,bin,value,i_max,true_phase,config_hash,seed\n";
    for (const auto& r : rows)
        csv += io::csv_row({std::to_string(r.update), std::to_string(r.bin),
                            io::format_g17(r.value), std::to_string(r.i_max),
                            std::to_string(r.true_phase), hash_hex(hash),
                            std::to_string(config.master_seed)});
    io::write_text_file(out_dir / "fig7_bins.csv", csv);
    io::write_text_file(out_dir / "demo_config.json",
                        io::config_to_json(config).dump(2) + "\n");
    return 0;
}

int cmd_theory(const fs::path& out_dir,
               const std::vector<std::int64_t>& np_grid,
               const std::vector<double>& ber_grid) {
    fs::create_directories(out_dir);
    std::string csv = "n_p,ber_target,snr_limit_db,shannon_floor_db\n";
    for (const std::int64_t n_p : np_grid) {
        for (const double ber : ber_grid) {
            theory::SnrLimitQuery q{static_cast<double>(n_p), 2.0, ber,
                                    theory::PaprSource::model()};
            csv += io::csv_row(
                {std::to_string(n_p), io::format_g17(ber),
                 io::format_g17(theory::snr_limit_db(q)),
                 io::format_g17(
                     theory::shannon_snr_floor_db(static_cast<double>(n_p), 2.0))});
        }
    }
    io::write_text_file(out_dir / "fig6.csv", csv);
    return 0;
}

}  // namespace pulselink::cli
