#include "cropclust/synth.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cropclust/errors.hpp"
#include "cropclust/parallel.hpp"

namespace cropclust {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kGroundStream = ~0ull;

// Stream ids per grid position: placement decisions, first plant, second
// plant.
std::uint64_t position_stream(std::size_t position, unsigned sub) {
  return static_cast<std::uint64_t>(position) * 4 + sub;
}

void require(bool ok, const char* field, const char* rule) {
  if (!ok) throw ParameterError(std::string("field spec: ") + field + " " + rule);
}

Point3 to_point(double x, double y, double z) {
  return {static_cast<float>(x), static_cast<float>(y), static_cast<float>(z)};
}

struct Placement {
  double x = 0.0;
  double y = 0.0;
  bool doubled = false;
  double second_x = 0.0;
  double second_y = 0.0;
};

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed ^ mix64(stream + kGolden))) {}

std::uint64_t CounterRng::next() { return mix64(key_ + (++counter_) * kGolden); }

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double CounterRng::normal() {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u = 1.0 - uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

PlantShape FieldSpec::shape() const {
  PlantShape s;
  s.points_per_plant = points_per_plant;
  s.stem_height = stem_height;
  s.leaf_count = leaf_count;
  s.leaf_length = leaf_length;
  s.leaf_width = leaf_width;
  s.stem_fraction = stem_fraction;
  s.noise_sigma = noise_sigma;
  return s;
}

void validate(const FieldSpec& spec) {
  require(spec.rows >= 1, "rows", "must be positive");
  require(spec.cols >= 1, "cols", "must be positive");
  require(spec.row_spacing > 0.0 && std::isfinite(spec.row_spacing), "row_spacing", "must be positive");
  require(spec.plant_spacing > 0.0 && std::isfinite(spec.plant_spacing), "plant_spacing", "must be positive");
  require(spec.position_jitter >= 0.0 && std::isfinite(spec.position_jitter), "position_jitter", "must be non-negative");
  require(spec.points_per_plant >= 1, "points_per_plant", "must be positive");
  require(spec.stem_height > 0.0 && std::isfinite(spec.stem_height), "stem_height", "must be positive");
  require(spec.leaf_length > 0.0 && std::isfinite(spec.leaf_length), "leaf_length", "must be positive");
  require(spec.leaf_width >= 0.0 && std::isfinite(spec.leaf_width), "leaf_width", "must be non-negative");
  require(spec.stem_fraction > 0.0 && spec.stem_fraction <= 1.0, "stem_fraction", "must lie in (0, 1]");
  require(spec.double_plant_prob >= 0.0 && spec.double_plant_prob <= 1.0, "double_plant_prob",
          "must lie in [0, 1]");
  require(spec.ground_point_density >= 0.0 && std::isfinite(spec.ground_point_density),
          "ground_point_density", "must be non-negative");
  require(spec.noise_sigma >= 0.0 && std::isfinite(spec.noise_sigma), "noise_sigma", "must be non-negative");
}

std::vector<Point3> generate_plant(const PlantShape& shape, CounterRng& rng, double base_x,
                                   double base_y) {
  const std::size_t total = shape.points_per_plant;
  const std::size_t stem_points =
      shape.leaf_count == 0
          ? total
          : std::min(total, static_cast<std::size_t>(std::llround(shape.stem_fraction * total)));
  const double sigma = shape.noise_sigma;

  std::vector<Point3> out;
  out.reserve(total);

  // Stem: segment from the base to a slightly leaning top.
  const double lean_x = sigma * rng.normal();
  const double lean_y = sigma * rng.normal();
  for (std::size_t i = 0; i < stem_points; ++i) {
    const double t = rng.uniform();
    out.push_back(to_point(base_x + t * lean_x + sigma * rng.normal(),
                           base_y + t * lean_y + sigma * rng.normal(),
                           t * shape.stem_height + sigma * rng.normal()));
  }
  if (shape.leaf_count == 0) return out;

  // Leaves: circular arcs in a random vertical plane through the stem,
  // rising at `rise` and bending down by `bend` radians over their length.
  const std::size_t leaf_points = total - stem_points;
  const double pi = std::numbers::pi;
  for (std::size_t leaf = 0; leaf < shape.leaf_count; ++leaf) {
    const std::size_t count =
        leaf_points / shape.leaf_count + (leaf < leaf_points % shape.leaf_count ? 1 : 0);
    const double slot = (static_cast<double>(leaf) + 0.5) / static_cast<double>(shape.leaf_count);
    const double attach_t = 0.3 + 0.6 * slot;
    const double attach_z = attach_t * shape.stem_height;
    const double azimuth = rng.uniform(0.0, 2.0 * pi);
    const double rise = rng.uniform(pi / 6.0, 0.4 * pi);
    const double bend = rng.uniform(pi / 3.0, 0.8 * pi);
    const double length = shape.leaf_length * rng.uniform(0.8, 1.2);
    const double radius = length / bend;
    const double dir_x = std::cos(azimuth);
    const double dir_y = std::sin(azimuth);
    const double start_x = base_x + attach_t * lean_x;
    const double start_y = base_y + attach_t * lean_y;

    for (std::size_t i = 0; i < count; ++i) {
      const double s = rng.uniform(0.0, length);
      const double heading = rise - s / radius;
      const double along = radius * (std::sin(rise) - std::sin(heading));
      const double up = radius * (std::cos(heading) - std::cos(rise));
      // Leaves taper from full width at the base to a point at the tip.
      const double across = shape.leaf_width * (1.0 - s / length) * (rng.uniform() - 0.5);
      out.push_back(to_point(start_x + along * dir_x - across * dir_y + sigma * rng.normal(),
                             start_y + along * dir_y + across * dir_x + sigma * rng.normal(),
                             attach_z + up + sigma * rng.normal()));
    }
  }
  return out;
}

SyntheticField generate_field(const FieldSpec& spec, unsigned threads) {
  validate(spec);
  const std::size_t positions = spec.rows * spec.cols;
  const PlantShape shape = spec.shape();

  std::vector<Placement> placements(positions);
  std::vector<std::uint32_t> first_label(positions);
  std::uint32_t next_label = 1;
  for (std::size_t p = 0; p < positions; ++p) {
    CounterRng rng(spec.seed, position_stream(p, 0));
    const std::size_t row = p / spec.cols;
    const std::size_t col = p % spec.cols;
    Placement& pl = placements[p];
    pl.x = static_cast<double>(col) * spec.plant_spacing +
           rng.uniform(-spec.position_jitter, spec.position_jitter);
    pl.y = static_cast<double>(row) * spec.row_spacing +
           rng.uniform(-spec.position_jitter, spec.position_jitter);
    pl.doubled = rng.uniform() < spec.double_plant_prob;
    if (pl.doubled) {
      const double offset = rng.uniform(0.5, 1.0) * spec.plant_spacing / 4.0;
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      pl.second_x = pl.x + offset * std::cos(angle);
      pl.second_y = pl.y + offset * std::sin(angle);
    }
    first_label[p] = next_label;
    next_label += pl.doubled ? 2 : 1;
  }
  const std::size_t num_plants = next_label - 1;

  std::vector<std::vector<Point3>> plants(num_plants);
  parallel_for(positions, threads, [&](std::size_t p) {
    const Placement& pl = placements[p];
    CounterRng first(spec.seed, position_stream(p, 1));
    plants[first_label[p] - 1] = generate_plant(shape, first, pl.x, pl.y);
    if (pl.doubled) {
      CounterRng second(spec.seed, position_stream(p, 2));
      plants[first_label[p]] = generate_plant(shape, second, pl.second_x, pl.second_y);
    }
  });

  const double min_x = -0.5 * spec.plant_spacing;
  const double max_x = (static_cast<double>(spec.cols) - 0.5) * spec.plant_spacing;
  const double min_y = -0.5 * spec.row_spacing;
  const double max_y = (static_cast<double>(spec.rows) - 0.5) * spec.row_spacing;
  const auto num_ground = static_cast<std::size_t>(
      std::llround(spec.ground_point_density * (max_x - min_x) * (max_y - min_y)));

  SyntheticField field;
  field.num_plants = num_plants;
  field.num_ground = num_ground;
  PointCloud& cloud = field.cloud;
  cloud.points.reserve(num_plants * spec.points_per_plant + num_ground);
  Labeling labels;
  labels.reserve(cloud.points.capacity());
  for (std::size_t i = 0; i < num_plants; ++i) {
    cloud.points.insert(cloud.points.end(), plants[i].begin(), plants[i].end());
    labels.insert(labels.end(), plants[i].size(), static_cast<std::uint32_t>(i + 1));
  }
  CounterRng ground(spec.seed, kGroundStream);
  for (std::size_t i = 0; i < num_ground; ++i) {
    const double x = ground.uniform(min_x, max_x);
    const double y = ground.uniform(min_y, max_y);
    cloud.points.push_back(to_point(x, y, spec.noise_sigma * ground.normal()));
    labels.push_back(0);
  }
  cloud.labels = std::move(labels);
  return field;
}

}  // namespace cropclust
