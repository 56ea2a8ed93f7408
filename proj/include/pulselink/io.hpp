#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pulselink/link.hpp"
#include "pulselink/signal.hpp"

namespace pulselink::io {

// Raw waveform format: header-less 64-bit IEEE-754 little-endian samples in
// <base>.f64, with sidecar <base>.json {"sample_rate": <num>, "length": <int>}.
void write_waveform_raw(const std::filesystem::path& base, const Waveform& x);
Waveform read_waveform_raw(const std::filesystem::path& base);

// Bit-exact double <-> string via C99 hex-float literals.
std::string double_to_hex(double v);
double double_from_hex(const std::string& s);

// %.17g — round-trip-exact decimal used in every CSV.
std::string format_g17(double v);

// Kernel exchange format: {"taps": [hex-float strings], "peak_index": n,
// "meta": {...}}. Numeric taps are accepted on read.
void write_kernel_json(const std::filesystem::path& path, const FirKernel& k,
                       const nlohmann::json& meta);
std::pair<FirKernel, nlohmann::json> read_kernel_json(
    const std::filesystem::path& path);

// Strict config parsing: unknown keys are rejected, every key optional with
// the LinkConfig default.
LinkConfig parse_link_config(const nlohmann::json& j);
LinkConfig load_link_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const LinkConfig& config);

std::string csv_row(const std::vector<std::string>& fields);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

// Fixed BerRecord CSV layout shared by `run` and `sweep`.
extern const char* const kBerCsvHeader;
std::string ber_csv_row(const BerRecord& rec);

}  // namespace pulselink::io
