#pragma once

// Binary file formats. Every format starts with a four-byte magic and a u32
// little-endian version (1). Integers are little-endian, bit rows are
// ceil(bits / 8) bytes LSB-first.
//
//   CSQH centers      u64 m, u32 k, m bit rows
//   CSQC codes        u64 n, u32 k, n bit rows
//   CSQM model        u32 layer count, u32 sizes..., f64 parameters
//   CSQF features     u64 n, u32 d, n*d f32 row-major
//   CSQL labels       u64 n, u32 q, n bit rows
//   CSQA assignments  u64 n, u32 k, u64 t, t bit rows (targets),
//                     t i64 source center indices, n u32 target ids

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "csq/centers.hpp"
#include "csq/hamming.hpp"
#include "csq/matrix.hpp"
#include "csq/model.hpp"

namespace csq {

inline constexpr std::uint32_t kFormatVersion = 1;

std::vector<std::uint8_t> encode_centers(const CenterSet& centers);
CenterSet decode_centers(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_codes(std::span<const PackedCode> codes,
                                       std::size_t k);
std::vector<PackedCode> decode_codes(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_model(const HashModel& model);
HashModel decode_model(std::span<const std::uint8_t> bytes);

// Values are narrowed to f32 on encode.
std::vector<std::uint8_t> encode_features(const Matrix& features);
Matrix decode_features(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_labels(std::span<const LabelSet> labels,
                                        std::size_t q);
std::vector<LabelSet> decode_labels(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_assignments(const SemanticCenterMap& map);
SemanticCenterMap decode_assignments(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path,
                     const std::string& text);

inline CenterSet load_centers(const std::filesystem::path& p) {
  return decode_centers(read_file(p));
}
inline void save_centers(const std::filesystem::path& p, const CenterSet& c) {
  write_file(p, encode_centers(c));
}
inline std::vector<PackedCode> load_codes(const std::filesystem::path& p) {
  return decode_codes(read_file(p));
}
inline void save_codes(const std::filesystem::path& p,
                       std::span<const PackedCode> codes, std::size_t k) {
  write_file(p, encode_codes(codes, k));
}
inline HashModel load_model(const std::filesystem::path& p) {
  return decode_model(read_file(p));
}
inline void save_model(const std::filesystem::path& p, const HashModel& m) {
  write_file(p, encode_model(m));
}
inline Matrix load_features(const std::filesystem::path& p) {
  return decode_features(read_file(p));
}
inline void save_features(const std::filesystem::path& p, const Matrix& f) {
  write_file(p, encode_features(f));
}
inline std::vector<LabelSet> load_labels(const std::filesystem::path& p) {
  return decode_labels(read_file(p));
}
inline void save_labels(const std::filesystem::path& p,
                        std::span<const LabelSet> labels, std::size_t q) {
  write_file(p, encode_labels(labels, q));
}
inline SemanticCenterMap load_assignments(const std::filesystem::path& p) {
  return decode_assignments(read_file(p));
}
inline void save_assignments(const std::filesystem::path& p,
                             const SemanticCenterMap& m) {
  write_file(p, encode_assignments(m));
}

}  // namespace csq
