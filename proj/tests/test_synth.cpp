#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "cropclust/cluster.hpp"
#include "cropclust/errors.hpp"
#include "cropclust/eval.hpp"
#include "cropclust/synth.hpp"

using namespace cropclust;

namespace {

FieldSpec small_field() {
  FieldSpec spec;
  spec.rows = 2;
  spec.cols = 2;
  spec.points_per_plant = 300;
  spec.ground_point_density = 100.0;
  return spec;
}

std::map<std::uint32_t, std::size_t> label_counts(const Labeling& labels) {
  std::map<std::uint32_t, std::size_t> counts;
  for (std::uint32_t l : labels) ++counts[l];
  return counts;
}

}  // namespace

TEST(CounterRng, SameStreamSameSequence) {
  CounterRng a(42, 3);
  CounterRng b(42, 3);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(CounterRng, StreamsAndSeedsDiffer) {
  CounterRng a(42, 3);
  CounterRng b(42, 4);
  CounterRng c(43, 3);
  int same_b = 0;
  int same_c = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next();
    same_b += x == b.next();
    same_c += x == c.next();
  }
  EXPECT_EQ(same_b, 0);
  EXPECT_EQ(same_c, 0);
}

TEST(CounterRng, Moments) {
  CounterRng rng(1, 0);
  constexpr int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  double lo = 1, hi = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.02);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(-2.0, 3.0);
    ASSERT_GE(u, -2.0);
    ASSERT_LT(u, 3.0);
  }
}

TEST(Plant, ExactPointCount) {
  PlantShape shape;
  for (std::size_t n : {1u, 7u, 1000u, 1003u}) {
    shape.points_per_plant = n;
    CounterRng rng(5, 0);
    EXPECT_EQ(generate_plant(shape, rng, 0.0, 0.0).size(), n);
  }
  shape.points_per_plant = 10;
  shape.leaf_count = 20;  // more leaves than leaf points
  CounterRng rng(5, 0);
  EXPECT_EQ(generate_plant(shape, rng, 0.0, 0.0).size(), 10u);
}

TEST(Plant, BareNoiselessStemProjectsToBase) {
  PlantShape shape;
  shape.leaf_count = 0;
  shape.noise_sigma = 0.0;
  CounterRng rng(9, 1);
  const auto pts = generate_plant(shape, rng, 1.25, -0.5);
  ASSERT_EQ(pts.size(), shape.points_per_plant);
  for (const Point3& p : pts) {
    ASSERT_EQ(p.x, 1.25f);
    ASSERT_EQ(p.y, -0.5f);
    ASSERT_GE(p.z, 0.0f);
    ASSERT_LE(p.z, static_cast<float>(shape.stem_height));
  }
}

TEST(Plant, StaysNearItsBase) {
  PlantShape shape;
  CounterRng rng(11, 2);
  const auto pts = generate_plant(shape, rng, 0.0, 0.0);
  const double reach = 1.2 * shape.leaf_length + shape.leaf_width + 0.05;
  for (const Point3& p : pts) {
    ASSERT_LT(std::hypot(p.x, p.y), reach);
    ASSERT_GT(p.z, -0.05f);
    ASSERT_LT(p.z, shape.stem_height + 1.2 * shape.leaf_length + 0.05);
  }
}

TEST(Field, SmallGridLabelsAndCounts) {
  const SyntheticField field = generate_field(small_field());
  EXPECT_EQ(field.num_plants, 4u);
  const auto counts = label_counts(*field.cloud.labels);
  ASSERT_EQ(counts.size(), 5u);
  for (std::uint32_t l = 1; l <= 4; ++l) EXPECT_EQ(counts.at(l), 300u);
  EXPECT_EQ(counts.at(0), field.num_ground);
  EXPECT_EQ(field.cloud.size(), 4 * 300 + field.num_ground);
  // Ground density times the field rectangle.
  EXPECT_EQ(field.num_ground, static_cast<std::size_t>(std::llround(100.0 * 0.4 * 1.52)));
}

TEST(Field, PlantsComeFirstThenGround) {
  const SyntheticField field = generate_field(small_field());
  const Labeling& labels = *field.cloud.labels;
  EXPECT_TRUE(std::is_sorted(labels.begin(), labels.end() - field.num_ground));
  for (std::size_t i = labels.size() - field.num_ground; i < labels.size(); ++i) {
    ASSERT_EQ(labels[i], 0u);
  }
}

TEST(Field, CertainDoublesGiveTwoPlantsPerPosition) {
  FieldSpec spec = small_field();
  spec.rows = 3;
  spec.double_plant_prob = 1.0;
  spec.leaf_count = 0;
  spec.noise_sigma = 0.0;
  const SyntheticField field = generate_field(spec);
  EXPECT_EQ(field.num_plants, 2 * 3 * 2u);
  const auto counts = label_counts(*field.cloud.labels);
  for (std::uint32_t l = 1; l <= field.num_plants; ++l) EXPECT_EQ(counts.at(l), 300u);

  // Bare noiseless stems: every plant sits on one (x, y); partners are
  // offset by between 1/8 and 1/4 of the plant spacing.
  std::vector<Point3> base(field.num_plants + 1);
  for (std::size_t i = 0; i < field.cloud.size(); ++i) {
    const std::uint32_t l = (*field.cloud.labels)[i];
    if (l != 0) base[l] = field.cloud.points[i];
  }
  for (std::uint32_t l = 1; l <= field.num_plants; l += 2) {
    const double off = std::hypot(base[l + 1].x - base[l].x, base[l + 1].y - base[l].y);
    EXPECT_GE(off, spec.plant_spacing / 8 - 1e-6);
    EXPECT_LE(off, spec.plant_spacing / 4 + 1e-6);
  }
}

TEST(Field, DefaultFieldHasAboutAHundredPlants) {
  FieldSpec spec;
  spec.points_per_plant = 20;
  spec.ground_point_density = 0.0;
  EXPECT_EQ(generate_field(spec).num_plants, 100u);
  spec.double_plant_prob = 0.05;
  const std::size_t plants = generate_field(spec).num_plants;
  EXPECT_GE(plants, 100u);
  EXPECT_LE(plants, 115u);
}

TEST(Field, DeterministicAndThreadIndependent) {
  FieldSpec spec = small_field();
  spec.double_plant_prob = 0.5;
  const SyntheticField a = generate_field(spec, 1);
  const SyntheticField b = generate_field(spec, 1);
  const SyntheticField c = generate_field(spec, 8);
  EXPECT_EQ(a.cloud.points, b.cloud.points);
  EXPECT_EQ(a.cloud.points, c.cloud.points);
  EXPECT_EQ(*a.cloud.labels, *c.cloud.labels);

  spec.seed += 1;
  EXPECT_NE(generate_field(spec).cloud.points, a.cloud.points);
}

TEST(Field, ValidationNamesTheField) {
  const std::vector<std::pair<std::string, std::function<void(FieldSpec&)>>> cases = {
      {"rows", [](FieldSpec& s) { s.rows = 0; }},
      {"cols", [](FieldSpec& s) { s.cols = 0; }},
      {"row_spacing", [](FieldSpec& s) { s.row_spacing = 0.0; }},
      {"plant_spacing", [](FieldSpec& s) { s.plant_spacing = -1.0; }},
      {"position_jitter", [](FieldSpec& s) { s.position_jitter = -0.1; }},
      {"points_per_plant", [](FieldSpec& s) { s.points_per_plant = 0; }},
      {"stem_height", [](FieldSpec& s) { s.stem_height = 0.0; }},
      {"leaf_length", [](FieldSpec& s) { s.leaf_length = 0.0; }},
      {"stem_fraction", [](FieldSpec& s) { s.stem_fraction = 0.0; }},
      {"double_plant_prob", [](FieldSpec& s) { s.double_plant_prob = 1.5; }},
      {"ground_point_density", [](FieldSpec& s) { s.ground_point_density = -1.0; }},
      {"noise_sigma", [](FieldSpec& s) { s.noise_sigma = NAN; }},
  };
  for (const auto& [name, mutate] : cases) {
    FieldSpec spec;
    mutate(spec);
    try {
      generate_field(spec);
      FAIL() << name;
    } catch (const ParameterError& e) {
      EXPECT_NE(std::string(e.what()).find(name), std::string::npos) << e.what();
    }
  }
}

TEST(FieldConfig, ParsesKeyValueLines) {
  std::istringstream in(
      "# a comment\n"
      "rows = 3\n"
      "cols: 4   # trailing\n"
      "\n"
      "double_plant_prob=0.25\n"
      "seed = 7\n");
  const FieldSpec spec = parse_field_config(in);
  EXPECT_EQ(spec.rows, 3u);
  EXPECT_EQ(spec.cols, 4u);
  EXPECT_DOUBLE_EQ(spec.double_plant_prob, 0.25);
  EXPECT_EQ(spec.seed, 7u);
  EXPECT_EQ(spec.points_per_plant, FieldSpec{}.points_per_plant);
}

TEST(FieldConfig, Errors) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_field_config(in);
  };
  EXPECT_THROW(parse("rows = 3\nbogus = 1\n"), ParseError);
  EXPECT_THROW(parse("rows = three\n"), ParseError);
  EXPECT_THROW(parse("rows = -2\n"), ParseError);
  EXPECT_THROW(parse("rows 3\n"), ParseError);
  try {
    parse("rows = 3\n\nleaf_length = x\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_field_config("/nonexistent/field.cfg"), IoError);
}

TEST(FieldConfig, SetFieldValue) {
  FieldSpec spec;
  set_field_value(spec, "noise_sigma", " 0.01 ");
  EXPECT_DOUBLE_EQ(spec.noise_sigma, 0.01);
  EXPECT_THROW(set_field_value(spec, "Rows", "1"), ParseError);
}

// Noiseless bare stems on a ground with no points: each stem is a stack of
// coincident projections, so GD Quickshift++ must recover every plant.
TEST(FieldRecovery, BareStemsAreRecoveredExactly) {
  for (double dbl : {0.0, 0.3}) {
    FieldSpec spec;
    spec.rows = 4;
    spec.cols = 5;
    spec.points_per_plant = 50;
    spec.leaf_count = 0;
    spec.noise_sigma = 0.0;
    spec.ground_point_density = 0.0;
    spec.double_plant_prob = dbl;
    spec.seed = 3;
    const SyntheticField field = generate_field(spec);
    for (std::size_t k : {1u, 10u, 49u}) {
      Params params;
      params.k = k;
      params.beta = 0.3;
      const Labeling labels = cluster(field.cloud, params);
      EXPECT_EQ(labels, *field.cloud.labels) << "double=" << dbl << " k=" << k;
    }
  }
}

TEST(FieldRecovery, DefaultShapeSmallField) {
  FieldSpec spec;
  spec.rows = 3;
  spec.cols = 4;
  spec.points_per_plant = 400;
  const SyntheticField field = generate_field(spec);
  Params params;
  params.k = 200;
  params.beta = 0.3;
  const Labeling labels = cluster(field.cloud, params);
  const MatchReport report = match_clusters(labels, *field.cloud.labels, true);
  EXPECT_GE(report.num_predicted, 12u);
  EXPECT_LE(report.num_predicted, 14u);
  EXPECT_GE(report.mean_iou, 0.8);
}
