#include <gtest/gtest.h>

#include <filesystem>

#include "csq/error.hpp"
#include "csq/formats.hpp"
#include "csq/rng.hpp"

namespace csq {
namespace {

template <typename Fn>
std::uint64_t format_error_offset(Fn&& fn) {
  try {
    fn();
  } catch (const FormatError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "expected a format error";
  return 0;
}

TEST(CentersFormat, ExactBytes) {
  const CenterSet cs = generate_centers(2, 4, 0);  // 1111, 1010
  const std::vector<std::uint8_t> expected{
      0x43, 0x53, 0x51, 0x48,                          // CSQH
      1, 0, 0, 0,                                      // version
      2, 0, 0, 0, 0, 0, 0, 0,                          // m
      4, 0, 0, 0,                                      // k
      0x0f, 0x05};                                     // rows, LSB-first
  EXPECT_EQ(encode_centers(cs), expected);
  const CenterSet back = decode_centers(expected);
  EXPECT_EQ(back, cs);
}

TEST(CentersFormat, MethodIsRecovered) {
  for (const CenterSet& cs : {generate_centers(8, 8, 0), generate_centers(12, 8, 0),
                              generate_centers(20, 10, 1),
                              generate_centers_bernoulli(20, 10, 1)}) {
    EXPECT_EQ(decode_centers(encode_centers(cs)), cs);
  }
}

TEST(CodesFormat, RoundTripAndHeader) {
  Rng rng(1);
  std::vector<PackedCode> codes;
  for (int i = 0; i < 37; ++i) {
    PackedCode c(70);
    for (std::size_t b = 0; b < 70; ++b) c.set(b, rng.fair_bit());
    codes.push_back(c);
  }
  const auto bytes = encode_codes(codes, 70);
  EXPECT_EQ(bytes.size(), 20u + 37 * 9);
  EXPECT_EQ(bytes[3], 'C');
  EXPECT_EQ(decode_codes(bytes), codes);
}

TEST(ModelFormat, RoundTrip) {
  const HashModel m = HashModel::initialize({5, 7, 6, 8}, 3);
  const auto bytes = encode_model(m);
  EXPECT_EQ(bytes.size(), 8u + 4 + 16 + 8 * m.parameters().size());
  EXPECT_EQ(decode_model(bytes), m);
}

TEST(FeaturesFormat, RoundTrip) {
  Rng rng(2);
  Matrix f(100, 16);
  for (double& v : f.data()) v = static_cast<float>(rng.normal());
  const auto bytes = encode_features(f);
  EXPECT_EQ(decode_features(bytes), f);
  EXPECT_EQ(encode_features(decode_features(bytes)), bytes);
}

TEST(FeaturesFormat, Rejections) {
  Matrix f(3, 2, 1.5);
  auto bytes = encode_features(f);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_EQ(format_error_offset([&] { decode_features(bad_magic); }), 0u);
  auto bad_version = bytes;
  bad_version[4] = 2;
  EXPECT_EQ(format_error_offset([&] { decode_features(bad_version); }), 4u);
  const auto empty = encode_features(Matrix(0, 2));
  EXPECT_THROW(decode_features(empty), FormatError);
}

TEST(Formats, EveryTruncationIsRejected) {
  const std::size_t cats[] = {0, 2};
  const std::vector<LabelSet> labels{LabelSet::single(3, 1), LabelSet::of(3, cats)};
  const CenterSet cs = generate_centers(3, 8, 0);
  const SemanticCenterMap map = assign_multi_label(cs, labels, 1);
  const std::vector<std::vector<std::uint8_t>> files{
      encode_centers(cs),
      encode_codes(cs.centers(), 8),
      encode_model(HashModel::initialize({2, 2, 2, 3}, 0)),
      encode_features(Matrix(2, 3, 0.25)),
      encode_labels(labels, 3),
      encode_assignments(map)};
  for (std::size_t f = 0; f < files.size(); ++f) {
    const auto& full = files[f];
    for (std::size_t len = 0; len < full.size(); ++len) {
      const std::span<const std::uint8_t> cut(full.data(), len);
      auto decode_any = [&] {
        switch (f) {
          case 0: decode_centers(cut); break;
          case 1: decode_codes(cut); break;
          case 2: decode_model(cut); break;
          case 3: decode_features(cut); break;
          case 4: decode_labels(cut); break;
          case 5: decode_assignments(cut); break;
        }
      };
      EXPECT_THROW(decode_any(), FormatError) << "file " << f << " len " << len;
    }
    auto extended = full;
    extended.push_back(0);
    EXPECT_THROW(
        {
          switch (f) {
            case 0: decode_centers(extended); break;
            case 1: decode_codes(extended); break;
            case 2: decode_model(extended); break;
            case 3: decode_features(extended); break;
            case 4: decode_labels(extended); break;
            case 5: decode_assignments(extended); break;
          }
        },
        FormatError);
  }
}

TEST(LabelsFormat, RoundTripAndEmptyRow) {
  std::vector<LabelSet> single;
  for (std::size_t i = 0; i < 10; ++i) single.push_back(LabelSet::single(10, i));
  EXPECT_EQ(decode_labels(encode_labels(single, 10)), single);

  const std::size_t cats[] = {5, 40, 79};
  const std::vector<LabelSet> coco{LabelSet::of(80, cats)};
  const auto back = decode_labels(encode_labels(coco, 80));
  EXPECT_EQ(back.front().count(), 3u);

  auto bytes = encode_labels(coco, 80);
  std::fill(bytes.begin() + 20, bytes.end(), 0);
  try {
    decode_labels(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidLabel);
  }
}

TEST(AssignmentsFormat, RoundTrip) {
  const std::size_t cats[] = {0, 1};
  const std::vector<LabelSet> labels{LabelSet::of(3, cats), LabelSet::single(3, 2),
                                     LabelSet::of(3, cats)};
  const SemanticCenterMap map = assign_multi_label(generate_centers(3, 16, 0), labels, 4);
  EXPECT_EQ(decode_assignments(encode_assignments(map)), map);
}

TEST(Files, MissingFileIsIoError) {
  try {
    read_file("/nonexistent/csq/file.csqf");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

TEST(Files, WriteThenRead) {
  const auto dir = std::filesystem::temp_directory_path() / "csq_formats_test";
  std::filesystem::create_directories(dir);
  const CenterSet cs = generate_centers(5, 16, 0);
  save_centers(dir / "c.csqh", cs);
  EXPECT_EQ(load_centers(dir / "c.csqh"), cs);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace csq
