#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "eqp/spectral.hpp"

namespace eqp::cli {

// EQPF field dump, all little-endian:
//   "EQPF" | u32 version | u32 N | f64 t | N*N f64 values (x index major)
inline constexpr char kFieldMagic[4] = {'E', 'Q', 'P', 'F'};
inline constexpr std::uint32_t kFieldFormatVersion = 1;

struct FieldDump {
  double t = 0.0;
  ScalarField field;
};

std::string encode_field(const ScalarField& field, double t);
FieldDump decode_field(const std::string& bytes);

void write_field(const std::filesystem::path& path, const ScalarField& field, double t);
FieldDump read_field(const std::filesystem::path& path);

}  // namespace eqp::cli
