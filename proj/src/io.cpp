#include "pulselink/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "pulselink/errors.hpp"
#include "pulselink/rng.hpp"

namespace pulselink::io {

namespace {

void require_little_endian() {
    const std::uint16_t probe = 1;
    unsigned char byte;
    std::memcpy(&byte, &probe, 1);
    if (byte != 1)
        throw std::runtime_error("raw waveform io assumes a little-endian host");
}

}  // namespace

void write_waveform_raw(const std::filesystem::path& base, const Waveform& x) {
    x.check();
    require_little_endian();
    std::filesystem::path raw = base;
    raw += ".f64";
    std::ofstream out(raw, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + raw.string());
    out.write(reinterpret_cast<const char*>(x.samples.data()),
              static_cast<std::streamsize>(x.samples.size() * sizeof(double)));
    if (!out) throw std::runtime_error("short write to " + raw.string());

    nlohmann::json sidecar;
    sidecar["sample_rate"] = x.sample_rate;
    sidecar["length"] = x.samples.size();
    std::filesystem::path meta = base;
    meta += ".json";
    write_text_file(meta, sidecar.dump(2) + "\n");
}

Waveform read_waveform_raw(const std::filesystem::path& base) {
    require_little_endian();
    std::filesystem::path meta = base;
    meta += ".json";
    std::ifstream ms(meta);
    if (!ms) throw std::runtime_error("cannot open " + meta.string());
    nlohmann::json sidecar = nlohmann::json::parse(ms);
    const std::size_t length = sidecar.at("length").get<std::size_t>();

    Waveform x;
    x.sample_rate = sidecar.at("sample_rate").get<double>();
    x.samples.resize(length);
    std::filesystem::path raw = base;
    raw += ".f64";
    std::ifstream in(raw, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + raw.string());
    in.read(reinterpret_cast<char*>(x.samples.data()),
            static_cast<std::streamsize>(length * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(length * sizeof(double)))
        throw std::runtime_error("short read from " + raw.string());
    x.check();
    return x;
}

std::string double_to_hex(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

double double_from_hex(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw invalid_input("bad hex-float literal: " + s);
    return v;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_kernel_json(const std::filesystem::path& path, const FirKernel& k,
                       const nlohmann::json& meta) {
    k.check();
    nlohmann::json j;
    auto taps = nlohmann::json::array();
    for (double v : k.taps) taps.push_back(double_to_hex(v));
    j["taps"] = std::move(taps);
    j["peak_index"] = k.peak_index;
    j["meta"] = meta;
    write_text_file(path, j.dump(2) + "\n");
}

std::pair<FirKernel, nlohmann::json> read_kernel_json(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    nlohmann::json j = nlohmann::json::parse(in);
    FirKernel k;
    for (const auto& t : j.at("taps")) {
        if (t.is_string())
            k.taps.push_back(double_from_hex(t.get<std::string>()));
        else
            k.taps.push_back(t.get<double>());
    }
    k.peak_index = j.at("peak_index").get<std::size_t>();
    k.check();
    return {std::move(k), j.value("meta", nlohmann::json::object())};
}

LinkConfig parse_link_config(const nlohmann::json& j) {
    static const char* const known[] = {
        "n_s",         "n_p",        "beta",        "half_len_symbols",
        "k_sections",  "pole_radius", "eta",        "m",
        "snr_db",      "n_bits",     "master_seed", "sync_mode",
        "true_offset", "amplitude",  "mma_extra_point"};
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw invalid_input("config: unknown key '" + key + "'");
    }
    LinkConfig c;
    c.n_s = j.value("n_s", c.n_s);
    c.n_p = j.value("n_p", c.n_p);
    c.beta = j.value("beta", c.beta);
    c.half_len_symbols = j.value("half_len_symbols", c.half_len_symbols);
    c.k_sections = j.value("k_sections", c.k_sections);
    c.pole_radius = j.value("pole_radius", c.pole_radius);
    c.eta = j.value("eta", c.eta);
    c.m = j.value("m", c.m);
    c.snr_db = j.value("snr_db", c.snr_db);
    c.n_bits = j.value("n_bits", c.n_bits);
    c.master_seed = j.value("master_seed", c.master_seed);
    if (j.contains("sync_mode"))
        c.sync_mode = sync_mode_from_string(j.at("sync_mode").get<std::string>());
    c.true_offset = j.value("true_offset", c.true_offset);
    c.amplitude = j.value("amplitude", c.amplitude);
    c.mma_extra_point = j.value("mma_extra_point", c.mma_extra_point);
    c.check();
    return c;
}

LinkConfig load_link_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return parse_link_config(nlohmann::json::parse(in));
}

nlohmann::json config_to_json(const LinkConfig& c) {
    nlohmann::json j;
    j["n_s"] = c.n_s;
    j["n_p"] = c.n_p;
    j["beta"] = c.beta;
    j["half_len_symbols"] = c.half_len_symbols;
    j["k_sections"] = c.k_sections;
    j["pole_radius"] = c.pole_radius;
    j["eta"] = c.eta;
    j["m"] = c.m;
    j["snr_db"] = c.snr_db;
    j["n_bits"] = c.n_bits;
    j["master_seed"] = c.master_seed;
    j["sync_mode"] = to_string(c.sync_mode);
    j["true_offset"] = c.true_offset;
    j["amplitude"] = c.amplitude;
    j["mma_extra_point"] = c.mma_extra_point;
    j["config_hash"] = config_hash(c);
    j["generator"] = rng::generator_id();
    return j;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) row += ',';
        row += fields[i];
    }
    row += '\n';
    return row;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << content;
    if (!out) throw std::runtime_error("short write to " + path.string());
}

const char* const kBerCsvHeader =
    "n_p,n_s,sync_mode,m,snr_target_db,snr_measured_db,n_bits,bit_errors,"
    "ber,ber_predicted,sync_failures,final_i_max,true_phase,config_hash,"
    "master_seed,generator\n";

std::string ber_csv_row(const BerRecord& rec) {
    char hash[24];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(rec.config_hash));
    return csv_row({std::to_string(rec.n_p), std::to_string(rec.n_s),
                    to_string(rec.sync_mode), format_g17(rec.m),
                    format_g17(rec.snr_target_db),
                    format_g17(rec.snr_measured_db),
                    std::to_string(rec.n_bits), std::to_string(rec.bit_errors),
                    format_g17(rec.ber), format_g17(rec.ber_predicted),
                    std::to_string(rec.sync_failures),
                    std::to_string(rec.final_i_max),
                    std::to_string(rec.true_phase), hash,
                    std::to_string(rec.master_seed), rng::generator_id()});
}

}  // namespace pulselink::io
