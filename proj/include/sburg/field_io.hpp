#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sburg/grid.hpp"

namespace sburg {

/// Raw field file "BFD1": magic, u32 version, f64 length, u64 n, f64 t,
/// then n little-endian f64 values. Bit-exact round trip.
void save_field_bfd(const std::filesystem::path& file, const Field& f, double t);

struct LoadedField {
    Field field;
    double t = 0.0;
};
LoadedField load_field_bfd(const std::filesystem::path& file);

/// CSV with rows "x,value" at full precision.
void save_field_csv(const std::filesystem::path& file, const Field& f);

/// Generic CSV table writer: header names and equal-length columns.
void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// FNV-1a 64-bit hash, hex-encoded; used for manifest content hashes.
std::string fnv1a_hex(std::span<const unsigned char> bytes);
std::string fnv1a_hex(const std::string& s);
std::string hash_file(const std::filesystem::path& file);

}  // namespace sburg
