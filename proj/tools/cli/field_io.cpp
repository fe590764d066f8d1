#include "field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "eqp/error.hpp"

namespace eqp::cli {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

void put_f64(std::string& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

std::uint64_t get_le(const std::string& in, std::size_t offset, int bytes) {
  std::uint64_t v = 0;
  for (int b = 0; b < bytes; ++b) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + b])) << (8 * b);
  }
  return v;
}

constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8;

}  // namespace

std::string encode_field(const ScalarField& field, double t) {
  const std::size_t n = field.grid().n();
  std::string out;
  out.reserve(kHeaderBytes + 8 * n * n);
  out.append(kFieldMagic, 4);
  put_u32(out, kFieldFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(n));
  put_f64(out, t);
  for (double v : field.values()) put_f64(out, v);
  return out;
}

FieldDump decode_field(const std::string& bytes) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kFieldMagic, 4) != 0) {
    throw Error("not an EQPF field dump");
  }
  const auto version = static_cast<std::uint32_t>(get_le(bytes, 4, 4));
  if (version != kFieldFormatVersion) throw Error("unsupported EQPF version " + std::to_string(version));
  const auto n = static_cast<std::size_t>(get_le(bytes, 8, 4));
  const double t = std::bit_cast<double>(get_le(bytes, 12, 8));
  if (bytes.size() != kHeaderBytes + 8 * n * n) {
    throw Error("EQPF payload has " + std::to_string(bytes.size() - kHeaderBytes) + " bytes, expected " +
                std::to_string(8 * n * n));
  }
  std::vector<double> values(n * n);
  for (std::size_t q = 0; q < values.size(); ++q) {
    values[q] = std::bit_cast<double>(get_le(bytes, kHeaderBytes + 8 * q, 8));
  }
  return {t, ScalarField(TorusGrid(n), std::move(values))};
}

void write_field(const std::filesystem::path& path, const ScalarField& field, double t) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  const std::string bytes = encode_field(field, t);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error("failed writing " + path.string());
}

FieldDump read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_field(bytes);
}

}  // namespace eqp::cli
