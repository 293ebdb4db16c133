#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "cropclust/pointcloud.hpp"

namespace cropclust {

// Counter-based generator: the n-th draw of stream (seed, stream) is a pure
// function of (seed, stream, n), so streams can be consumed independently
// and in any order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double normal();                        // standard normal

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct PlantShape {
  std::size_t points_per_plant = 1000;
  double stem_height = 0.35;
  std::size_t leaf_count = 5;
  double leaf_length = 0.20;
  double leaf_width = 0.04;
  // Share of points on the stem when the plant has leaves.
  double stem_fraction = 0.4;
  double noise_sigma = 0.003;
};

// All lengths share one (arbitrary) unit; the defaults read as meters and
// approximate a young corn field.
struct FieldSpec {
  std::size_t rows = 10;
  std::size_t cols = 10;
  double row_spacing = 0.76;
  double plant_spacing = 0.20;
  double position_jitter = 0.02;
  std::size_t points_per_plant = 1000;
  double stem_height = 0.35;
  std::size_t leaf_count = 5;
  double leaf_length = 0.20;
  double leaf_width = 0.04;
  double stem_fraction = 0.4;
  double double_plant_prob = 0.0;
  double ground_point_density = 300.0;  // points per unit area
  double noise_sigma = 0.003;
  std::uint64_t seed = 42;

  PlantShape shape() const;
};

// Throws ParameterError naming the first invalid field.
void validate(const FieldSpec& spec);

// One plant rooted at base = (x, y, 0): a near-vertical stem plus
// leaf_count arc-shaped leaves attached at distinct stem heights. Returns
// exactly points_per_plant points.
std::vector<Point3> generate_plant(const PlantShape& shape, CounterRng& rng, double base_x,
                                   double base_y);

struct SyntheticField {
  PointCloud cloud;  // labels: 0 ground, 1..num_plants plants
  std::size_t num_plants = 0;
  std::size_t num_ground = 0;
};

// rows x cols grid of plant positions (x along the row, y across rows). A
// position holds a second, slightly offset plant with probability
// double_plant_prob. Plants come first in label order, then ground points.
// Deterministic in spec, independent of `threads`.
SyntheticField generate_field(const FieldSpec& spec, unsigned threads = 0);

// Flat "key = value" config ('#' starts a comment). Keys are the FieldSpec
// member names. Throws ParseError on unknown keys or malformed values.
FieldSpec parse_field_config(std::istream& in);
FieldSpec load_field_config(const std::filesystem::path& path);
void set_field_value(FieldSpec& spec, std::string_view key, std::string_view value);

}  // namespace cropclust
