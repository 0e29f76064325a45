#include "csq/formats.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <string_view>

#include "csq/error.hpp"

namespace csq {
namespace {

using Magic = std::array<std::uint8_t, 4>;

constexpr Magic kCentersMagic{'C', 'S', 'Q', 'H'};
constexpr Magic kCodesMagic{'C', 'S', 'Q', 'C'};
constexpr Magic kModelMagic{'C', 'S', 'Q', 'M'};
constexpr Magic kFeaturesMagic{'C', 'S', 'Q', 'F'};
constexpr Magic kLabelsMagic{'C', 'S', 'Q', 'L'};
constexpr Magic kAssignmentsMagic{'C', 'S', 'Q', 'A'};

class Writer {
 public:
  void magic(const Magic& m) { bytes_.insert(bytes_.end(), m.begin(), m.end()); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void i64(std::int64_t v) { le(static_cast<std::uint64_t>(v), 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void row(const PackedCode& c) {
    const auto b = c.to_bytes();
    bytes_.insert(bytes_.end(), b.begin(), b.end());
  }
  void header(const Magic& m) {
    magic(m);
    u32(kFormatVersion);
  }

  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  std::vector<std::uint8_t> bytes_;
};

// Bounds-checked little-endian reader; every failure reports its offset.
class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, std::string_view what)
      : bytes_(bytes), what_(what) {}

  void header(const Magic& m) {
    need(4, "magic");
    if (!std::equal(m.begin(), m.end(), bytes_.begin())) {
      fail("bad magic, expected " + std::string(m.begin(), m.end()));
    }
    pos_ += 4;
    const std::uint32_t version = u32();
    if (version != kFormatVersion) {
      pos_ -= 4;
      fail("unsupported version " + std::to_string(version));
    }
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4, "u32")); }
  std::uint64_t u64() { return le(8, "u64"); }
  std::int64_t i64() { return static_cast<std::int64_t>(le(8, "i64")); }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }

  PackedCode row(std::size_t k) {
    const std::size_t n = byte_count(k);
    need(n, "bit row");
    const std::uint64_t at = pos_;
    try {
      PackedCode c = PackedCode::from_bytes(bytes_.subspan(pos_, n), k);
      pos_ += n;
      return c;
    } catch (const Error&) {
      throw FormatError(std::string(what_) + ": padding bits set in bit row", at);
    }
  }

  // Checks that `count` records of `size` bytes remain, guarding against
  // allocation from a corrupt header.
  void expect_records(std::uint64_t count, std::uint64_t size,
                      const char* field) {
    if (size != 0 && count > (bytes_.size() - pos_) / size) {
      fail(std::string("truncated ") + field + ": header declares " +
           std::to_string(count) + " records");
    }
  }

  void finish() {
    if (pos_ != bytes_.size()) {
      fail(std::to_string(bytes_.size() - pos_) + " trailing bytes");
    }
  }

  std::uint64_t position() const { return pos_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw FormatError(std::string(what_) + ": " + msg, pos_);
  }

 private:
  void need(std::size_t n, const char* field) {
    if (bytes_.size() - pos_ < n) fail(std::string("truncated ") + field);
  }
  std::uint64_t le(int n, const char* field) {
    need(static_cast<std::size_t>(n), field);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::string_view what_;
  std::uint64_t pos_ = 0;
};

std::uint32_t narrow_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::kInvalidDimension,
                std::string(what) + " does not fit in 32 bits");
  }
  return static_cast<std::uint32_t>(v);
}

// Recovers the generation method, which the file does not store.
CenterMethod infer_method(std::size_t k, const std::vector<PackedCode>& rows) {
  if (is_power_of_two(k) && rows.size() <= 2 * k) {
    const SignMatrix h = hadamard_matrix(k);
    bool matches = true;
    for (std::size_t i = 0; i < rows.size() && matches; ++i) {
      const bool negate = i >= k;
      for (std::size_t c = 0; c < k; ++c) {
        const int v = negate ? -h(i % k, c) : h(i % k, c);
        if (rows[i].bit(c) != (v > 0)) {
          matches = false;
          break;
        }
      }
    }
    if (matches) {
      return rows.size() <= k ? CenterMethod::kHadamard : CenterMethod::kHadamard2k;
    }
  }
  for (const auto& r : rows) {
    if (r.popcount() != k / 2) return CenterMethod::kBernoulli;
  }
  return CenterMethod::kBalancedRandom;
}

}  // namespace

std::vector<std::uint8_t> encode_centers(const CenterSet& centers) {
  Writer w;
  w.header(kCentersMagic);
  w.u64(centers.size());
  w.u32(narrow_u32(centers.k(), "code length"));
  for (const auto& c : centers.centers()) w.row(c);
  return w.take();
}

CenterSet decode_centers(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, "centers");
  r.header(kCentersMagic);
  const std::uint64_t m = r.u64();
  const std::uint32_t k = r.u32();
  if (m == 0) r.fail("center count is zero");
  if (k == 0) r.fail("code length is zero");
  r.expect_records(m, byte_count(k), "center rows");
  std::vector<PackedCode> rows;
  rows.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) rows.push_back(r.row(k));
  r.finish();
  const CenterMethod method = infer_method(k, rows);
  return CenterSet(k, std::move(rows), method);
}

std::vector<std::uint8_t> encode_codes(std::span<const PackedCode> codes,
                                       std::size_t k) {
  Writer w;
  w.header(kCodesMagic);
  w.u64(codes.size());
  w.u32(narrow_u32(k, "code length"));
  for (const auto& c : codes) {
    if (c.k() != k) throw Error(ErrorKind::kDimension, "code length differs from header k");
    w.row(c);
  }
  return w.take();
}

std::vector<PackedCode> decode_codes(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, "codes");
  r.header(kCodesMagic);
  const std::uint64_t n = r.u64();
  const std::uint32_t k = r.u32();
  if (k == 0) r.fail("code length is zero");
  r.expect_records(n, byte_count(k), "code rows");
  std::vector<PackedCode> codes;
  codes.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) codes.push_back(r.row(k));
  r.finish();
  return codes;
}

std::vector<std::uint8_t> encode_model(const HashModel& model) {
  Writer w;
  w.header(kModelMagic);
  w.u32(static_cast<std::uint32_t>(model.sizes().size()));
  for (std::size_t s : model.sizes()) w.u32(narrow_u32(s, "layer size"));
  for (double p : model.parameters()) w.f64(p);
  return w.take();
}

HashModel decode_model(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, "model");
  r.header(kModelMagic);
  const std::uint32_t count = r.u32();
  if (count != 4) r.fail("expected 4 layer sizes, got " + std::to_string(count));
  LayerSizes sizes{};
  for (auto& s : sizes) {
    s = r.u32();
    if (s == 0) r.fail("zero layer size");
  }
  const std::size_t n = HashModel::parameter_count(sizes);
  r.expect_records(n, 8, "parameters");
  HashModel model(sizes);
  for (double& p : model.parameters()) p = r.f64();
  r.finish();
  return model;
}

std::vector<std::uint8_t> encode_features(const Matrix& features) {
  Writer w;
  w.header(kFeaturesMagic);
  w.u64(features.rows());
  w.u32(narrow_u32(features.cols(), "feature dimension"));
  for (double v : features.data()) w.f32(static_cast<float>(v));
  return w.take();
}

Matrix decode_features(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, "features");
  r.header(kFeaturesMagic);
  const std::uint64_t n = r.u64();
  const std::uint32_t d = r.u32();
  if (n == 0) r.fail("feature file holds no rows");
  if (d == 0) r.fail("feature dimension is zero");
  if (n > std::numeric_limits<std::uint64_t>::max() / d) r.fail("n * d overflows");
  r.expect_records(n * d, 4, "feature values");
  Matrix m(n, d);
  for (double& v : m.data()) v = r.f32();
  r.finish();
  return m;
}

std::vector<std::uint8_t> encode_labels(std::span<const LabelSet> labels,
                                        std::size_t q) {
  Writer w;
  w.header(kLabelsMagic);
  w.u64(labels.size());
  w.u32(narrow_u32(q, "category count"));
  for (const auto& l : labels) {
    if (l.q() != q) throw Error(ErrorKind::kDimension, "label set over a different q");
    w.row(l.bits());
  }
  return w.take();
}

std::vector<LabelSet> decode_labels(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, "labels");
  r.header(kLabelsMagic);
  const std::uint64_t n = r.u64();
  const std::uint32_t q = r.u32();
  if (n == 0) r.fail("label file holds no rows");
  if (q == 0) r.fail("category count is zero");
  r.expect_records(n, byte_count(q), "label rows");
  std::vector<LabelSet> labels;
  labels.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    PackedCode bits = r.row(q);
    if (bits.popcount() == 0) {
      throw Error(ErrorKind::kInvalidLabel,
                  "label row " + std::to_string(i) + " has no categories");
    }
    labels.emplace_back(std::move(bits));
  }
  r.finish();
  return labels;
}

std::vector<std::uint8_t> encode_assignments(const SemanticCenterMap& map) {
  Writer w;
  w.header(kAssignmentsMagic);
  w.u64(map.assignment.size());
  w.u32(narrow_u32(map.k, "code length"));
  w.u64(map.targets.size());
  for (const auto& t : map.targets) w.row(t);
  for (std::int64_t s : map.source_center) w.i64(s);
  for (std::uint32_t a : map.assignment) w.u32(a);
  return w.take();
}

SemanticCenterMap decode_assignments(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, "assignments");
  r.header(kAssignmentsMagic);
  SemanticCenterMap map;
  const std::uint64_t n = r.u64();
  map.k = r.u32();
  const std::uint64_t t = r.u64();
  if (map.k == 0) r.fail("code length is zero");
  r.expect_records(t, byte_count(map.k) + 8, "targets");
  map.targets.reserve(t);
  for (std::uint64_t i = 0; i < t; ++i) map.targets.push_back(r.row(map.k));
  map.source_center.reserve(t);
  for (std::uint64_t i = 0; i < t; ++i) {
    const std::int64_t s = r.i64();
    if (s < -1) r.fail("source center index below -1");
    map.source_center.push_back(s);
  }
  r.expect_records(n, 4, "sample assignments");
  map.assignment.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint32_t a = r.u32();
    if (a >= t) r.fail("assignment refers to missing target " + std::to_string(a));
    map.assignment.push_back(a);
  }
  r.finish();
  return map;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::kIo, "read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                             text.size()));
}

}  // namespace csq
