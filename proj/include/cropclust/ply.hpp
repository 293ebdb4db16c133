#pragma once

#include <filesystem>
#include <iosfwd>

#include "cropclust/pointcloud.hpp"

namespace cropclust {

enum class PlyFormat { kAscii, kBinaryLittleEndian };

// How RGB vertex colors turn into labels when no integer `label` property
// exists.
enum class ColorLabels {
  // Inverse of label_to_color.
  kPalette,
  // Each distinct RGB triple becomes a label, numbered 1, 2, ... in order of
  // first appearance; black stays 0. For ground-truth clouds colored with an
  // arbitrary per-plant palette.
  kDistinct,
};

struct PlyReadOptions {
  ColorLabels color_labels = ColorLabels::kPalette;
};

// Reads the vertex element (x, y, z and optional red/green/blue or label) of
// an ascii or binary_little_endian PLY. Unknown properties and elements are
// skipped. Throws ParseError (with header line number), TruncationError,
// DataError (non-finite coordinate, with point index) or IoError.
PointCloud load_ply(const std::filesystem::path& path,
                    const PlyReadOptions& options = {});
PointCloud read_ply(std::istream& in, const PlyReadOptions& options = {});

// Writes x, y, z (float) and red, green, blue from label_to_color. Output is
// byte-exact deterministic for a given cloud, labeling and format.
void save_ply(const PointCloud& cloud, const Labeling& labeling,
              const std::filesystem::path& path, PlyFormat format);
void write_ply(std::ostream& out, const PointCloud& cloud,
               const Labeling& labeling, PlyFormat format);

}  // namespace cropclust
