#include "cropclust/cluster.hpp"

#include <string>

#include "cropclust/errors.hpp"

namespace cropclust {
namespace {

struct Arity {
  bool d;
  bool k;
  bool beta;
};

Arity arity(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kRain:
    case Algorithm::kZQuickshift:
      return {true, false, false};
    case Algorithm::kGdQuickshift:
      return {true, true, false};
    case Algorithm::kGdQuickshiftPlusPlus:
      return {false, true, true};
  }
  return {false, false, false};
}

void check_presence(Algorithm algorithm, const char* name, bool required, bool present) {
  if (required == present) return;
  throw ParameterError(std::string("algorithm '") + std::string(algorithm_name(algorithm)) +
                       (required ? "' requires parameter " : "' does not accept parameter ") +
                       name + " (" + std::string(parameter_arity_table()) + ")");
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
  if (name == "rain") return Algorithm::kRain;
  if (name == "zqs") return Algorithm::kZQuickshift;
  if (name == "gdqs") return Algorithm::kGdQuickshift;
  if (name == "gdqspp") return Algorithm::kGdQuickshiftPlusPlus;
  throw ParameterError("unknown algorithm '" + std::string(name) +
                       "' (expected rain, zqs, gdqs or gdqspp)");
}

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kRain: return "rain";
    case Algorithm::kZQuickshift: return "zqs";
    case Algorithm::kGdQuickshift: return "gdqs";
    case Algorithm::kGdQuickshiftPlusPlus: return "gdqspp";
  }
  return "unknown";
}

std::string_view parameter_arity_table() {
  return "rain: d; zqs: d; gdqs: d, k; gdqspp: k, beta";
}

void validate_params(const Params& params) {
  const Arity need = arity(params.algorithm);
  check_presence(params.algorithm, "d", need.d, params.d.has_value());
  check_presence(params.algorithm, "k", need.k, params.k.has_value());
  check_presence(params.algorithm, "beta", need.beta, params.beta.has_value());
  if (params.d && !(*params.d > 0.0 && std::isfinite(*params.d))) {
    throw ParameterError("d must be a positive finite number");
  }
  if (params.k && *params.k < 1) throw ParameterError("k must be a positive integer");
  if (params.beta && !(*params.beta >= 0.0 && *params.beta <= 1.0)) {
    throw ParameterError("beta must lie in [0, 1]");
  }
}

Labeling cluster(const PointCloud& cloud, const Params& params, const RunOptions& options) {
  validate_params(params);
  const std::size_t n = cloud.size();
  if (n == 0) return {};

  if (params.k) {
    if (n < 2) throw DataError("density-based clustering needs at least 2 points");
    if (*params.k >= n) {
      throw ParameterError("k = " + std::to_string(*params.k) + " must be below the point count " +
                           std::to_string(n));
    }
  }

  switch (params.algorithm) {
    case Algorithm::kRain:
      return forest_to_labels(rain_parents(KdTree3(coords_3d(cloud)), *params.d, options));
    case Algorithm::kZQuickshift:
      return forest_to_labels(zqs_parents(KdTree3(coords_3d(cloud)), *params.d, options));
    case Algorithm::kGdQuickshift: {
      const KdTree2 ground(coords_2d(cloud));
      const DensityField density = knn_density_2d(ground, *params.k, options);
      return forest_to_labels(gdqs_parents(ground, *params.d, density, options));
    }
    case Algorithm::kGdQuickshiftPlusPlus: {
      DensityField density;
      CoreSet cores;
      {
        const KdTree2 ground(coords_2d(cloud));
        density = knn_density_2d(ground, *params.k, options);
        cores = extract_cores(ground, density, *params.beta, options);
      }
      return gdqspp_assign(KdTree3(coords_3d(cloud)), density, cores, options);
    }
  }
  throw ParameterError("unknown algorithm");
}

}  // namespace cropclust
