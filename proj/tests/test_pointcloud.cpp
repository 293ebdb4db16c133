#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "cropclust/errors.hpp"
#include "cropclust/palette.hpp"
#include "cropclust/ply.hpp"
#include "support.hpp"

using namespace cropclust;
using testing_support::cloud_of;

namespace {

std::string to_ply(const PointCloud& cloud, const Labeling& labels, PlyFormat format) {
  std::ostringstream out;
  write_ply(out, cloud, labels, format);
  return out.str();
}

PointCloud from_ply(const std::string& text, PlyReadOptions options = {}) {
  std::istringstream in(text);
  return read_ply(in, options);
}

}  // namespace

TEST(Palette, ZeroIsBlack) {
  EXPECT_EQ(label_to_color(0), (Rgb{0, 0, 0}));
  EXPECT_EQ(color_to_label({0, 0, 0}), 0u);
}

TEST(Palette, FollowsMultiplicativeHash) {
  for (std::uint32_t label : {1u, 7u, 255u, 65536u, kPaletteSize - 1}) {
    const std::uint32_t h = static_cast<std::uint32_t>((std::uint64_t{label} * 2654435761ull) % kPaletteSize);
    const Rgb rgb = label_to_color(label);
    EXPECT_EQ(rgb[0], (h >> 16) & 0xff);
    EXPECT_EQ(rgb[1], (h >> 8) & 0xff);
    EXPECT_EQ(rgb[2], h & 0xff);
  }
}

TEST(Palette, InverseOnSmallLabels) {
  for (std::uint32_t label = 0; label <= 10000; ++label) {
    ASSERT_EQ(color_to_label(label_to_color(label)), label);
  }
}

TEST(Palette, InjectiveOverWholeRange) {
  // The full label space fits in a 2 MiB bitmap.
  std::vector<std::uint8_t> seen(kPaletteSize / 8, 0);
  for (std::uint32_t label = 0; label < kPaletteSize; ++label) {
    const Rgb c = label_to_color(label);
    const std::uint32_t key = (std::uint32_t{c[0]} << 16) | (std::uint32_t{c[1]} << 8) | c[2];
    ASSERT_FALSE(seen[key / 8] & (1u << (key % 8))) << "collision at label " << label;
    seen[key / 8] |= static_cast<std::uint8_t>(1u << (key % 8));
    if (label != 0) {
      ASSERT_NE(key, 0u) << "label " << label << " maps to black";
    }
  }
}

TEST(Palette, RejectsLabelsOutOfRange) {
  EXPECT_THROW(label_to_color(kPaletteSize), RangeError);
  EXPECT_THROW(label_to_color(std::numeric_limits<std::uint32_t>::max()), RangeError);
}

TEST(Palette, EveryColorDecodes) {
  std::mt19937 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Rgb c = {static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()),
                   static_cast<std::uint8_t>(rng())};
    EXPECT_EQ(label_to_color(color_to_label(c)), c);
  }
}

TEST(PointCloud, ValidateRejectsNonFinite) {
  PointCloud c = cloud_of({{0, 0, 0}, {1, std::numeric_limits<float>::quiet_NaN(), 0}});
  try {
    validate(c);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
  }
}

TEST(PointCloud, ValidateRejectsLabelLengthMismatch) {
  PointCloud c = cloud_of({{0, 0, 0}});
  c.labels = Labeling{1, 2};
  EXPECT_THROW(validate(c), DataError);
}

TEST(PointCloud, ScaledMultipliesEveryCoordinate) {
  PointCloud c = cloud_of({{1, 2, 3}, {-0.5f, 0.25f, 8}});
  c.labels = Labeling{4, 5};
  const PointCloud s = scaled(c, 4.0f);
  EXPECT_EQ(s.points[0], (Point3{4, 8, 12}));
  EXPECT_EQ(s.points[1], (Point3{-2, 1, 32}));
  EXPECT_EQ(s.labels, c.labels);
}

TEST(Ply, MinimalAsciiFile) {
  const PointCloud c = from_ply(
      "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\n"
      "property float z\nend_header\n0 0 0\n");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.points[0], (Point3{0, 0, 0}));
  EXPECT_FALSE(c.has_labels());
}

TEST(Ply, ShortBodyIsTruncation) {
  std::string text =
      "ply\nformat ascii 1.0\nelement vertex 10\nproperty float x\nproperty float y\n"
      "property float z\nend_header\n";
  for (int i = 0; i < 9; ++i) text += "1 2 3\n";
  EXPECT_THROW(from_ply(text), TruncationError);

  PointCloud ten;
  ten.points.assign(10, Point3{1, 2, 3});
  std::string binary = to_ply(ten, Labeling(10, 1), PlyFormat::kBinaryLittleEndian);
  binary.resize(binary.size() - 15);  // one vertex of 3 floats + 3 bytes
  EXPECT_THROW(from_ply(binary), TruncationError);
}

TEST(Ply, HeaderErrorsNameTheLine) {
  const std::string text =
      "ply\nformat ascii 1.0\nelement vertex 1\nproperty flot x\nend_header\n0\n";
  try {
    from_ply(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
  EXPECT_THROW(from_ply("plx\n"), ParseError);
  EXPECT_THROW(from_ply("ply\nformat binary_big_endian 1.0\nend_header\n"), ParseError);
  EXPECT_THROW(from_ply("ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\n"), ParseError);
}

TEST(Ply, NonFiniteCoordinateNamesThePoint) {
  const std::string text =
      "ply\nformat ascii 1.0\nelement vertex 3\nproperty float x\nproperty float y\n"
      "property float z\nend_header\n0 0 0\n1 1 1\n2 nan 2\n";
  try {
    from_ply(text);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("point 2"), std::string::npos) << e.what();
  }
}

TEST(Ply, UnknownPropertiesAndElementsAreSkipped) {
  const std::string text =
      "ply\nformat ascii 1.0\ncomment made by hand\n"
      "element vertex 2\nproperty double nx\nproperty float x\nproperty float y\n"
      "property float z\nproperty list uchar int extra\nproperty uint label\n"
      "element face 1\nproperty list uchar int vertex_indices\n"
      "end_header\n"
      "9 1 2 3 2 5 6 7\n"
      "9 4 5 6 0 8\n"
      "3 0 1 1\n";
  const PointCloud c = from_ply(text);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.points[0], (Point3{1, 2, 3}));
  EXPECT_EQ(c.points[1], (Point3{4, 5, 6}));
  ASSERT_TRUE(c.has_labels());
  EXPECT_EQ(*c.labels, (Labeling{7, 8}));
}

TEST(Ply, LabelPropertyTakesPriorityOverColor) {
  const std::string text =
      "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\n"
      "property float z\nproperty uchar red\nproperty uchar green\nproperty uchar blue\n"
      "property uint label\nend_header\n0 0 0 10 20 30 42\n";
  EXPECT_EQ(*from_ply(text).labels, (Labeling{42}));
}

TEST(Ply, DistinctColorMode) {
  const std::string text =
      "ply\nformat ascii 1.0\nelement vertex 4\nproperty float x\nproperty float y\n"
      "property float z\nproperty uchar red\nproperty uchar green\nproperty uchar blue\n"
      "end_header\n0 0 0 9 9 9\n1 0 0 0 0 0\n2 0 0 1 2 3\n3 0 0 9 9 9\n";
  const PointCloud c = from_ply(text, {ColorLabels::kDistinct});
  EXPECT_EQ(*c.labels, (Labeling{1, 0, 2, 1}));
}

TEST(Ply, EmptyCloudIsValid) {
  const std::string text = to_ply(PointCloud{}, {}, PlyFormat::kAscii);
  EXPECT_NE(text.find("element vertex 0"), std::string::npos);
  const PointCloud back = from_ply(text);
  EXPECT_TRUE(back.empty());
}

TEST(Ply, SinglePointColorMatchesPalette) {
  const PointCloud c = cloud_of({{1.5f, -2.0f, 0.25f}});
  const std::string text = to_ply(c, {7}, PlyFormat::kAscii);
  const Rgb rgb = label_to_color(7);
  const std::string expected_row = "1.5 -2 0.25 " + std::to_string(rgb[0]) + " " +
                                   std::to_string(rgb[1]) + " " + std::to_string(rgb[2]);
  EXPECT_NE(text.find(expected_row), std::string::npos) << text;
}

TEST(Ply, RoundTripBinaryIsBitExact) {
  PointCloud c = testing_support::uniform_cloud(500, 11, 1000.0f);
  c.points.push_back({std::numeric_limits<float>::denorm_min(), -0.0f, 1e30f});
  Labeling labels(c.size());
  std::mt19937 rng(5);
  for (auto& l : labels) l = rng() % kPaletteSize;
  const PointCloud back = from_ply(to_ply(c, labels, PlyFormat::kBinaryLittleEndian));
  ASSERT_EQ(back.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    ASSERT_EQ(std::memcmp(&back.points[i], &c.points[i], sizeof(Point3)), 0) << i;
  }
  EXPECT_EQ(*back.labels, labels);
}

TEST(Ply, RoundTripAsciiWithinTolerance) {
  const PointCloud c = testing_support::uniform_cloud(500, 12, 50.0f);
  Labeling labels(c.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<std::uint32_t>(i % 37);
  const PointCloud back = from_ply(to_ply(c, labels, PlyFormat::kAscii));
  ASSERT_EQ(back.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_NEAR(back.points[i].x, c.points[i].x, 1e-6 * std::max(1.0f, std::abs(c.points[i].x)));
    EXPECT_NEAR(back.points[i].y, c.points[i].y, 1e-6 * std::max(1.0f, std::abs(c.points[i].y)));
    EXPECT_NEAR(back.points[i].z, c.points[i].z, 1e-6 * std::max(1.0f, std::abs(c.points[i].z)));
  }
  EXPECT_EQ(*back.labels, labels);
}

TEST(Ply, WriterIsDeterministic) {
  const PointCloud c = testing_support::uniform_cloud(100, 13);
  const Labeling labels(100, 3);
  for (PlyFormat f : {PlyFormat::kAscii, PlyFormat::kBinaryLittleEndian}) {
    EXPECT_EQ(to_ply(c, labels, f), to_ply(c, labels, f));
  }
}

TEST(Ply, FileRoundTripAndErrors) {
  const auto dir = testing_support::scratch_dir("ply");
  const PointCloud c = testing_support::uniform_cloud(20, 14);
  const Labeling labels(20, 9);
  save_ply(c, labels, dir / "a.ply", PlyFormat::kBinaryLittleEndian);
  const PointCloud back = load_ply(dir / "a.ply");
  EXPECT_EQ(back.points, c.points);
  EXPECT_EQ(*back.labels, labels);

  EXPECT_THROW(load_ply(dir / "missing.ply"), IoError);
  EXPECT_THROW(save_ply(c, labels, dir / "no" / "such" / "dir.ply", PlyFormat::kAscii), IoError);
  EXPECT_THROW(save_ply(c, Labeling(3, 1), dir / "b.ply", PlyFormat::kAscii), Error);
}
