#pragma once

#include <cstddef>
#include <vector>

namespace cropclust {

// Dense row-major weight matrix.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Exact maximum-weight one-to-one assignment on a rectangular matrix
// (Hungarian method with potentials, O(s^2 * l) for s = min side, l = max
// side). Returns, per row, the assigned column or -1; exactly min(rows, cols)
// rows are assigned.
std::vector<int> max_weight_assignment(const WeightMatrix& weights);

}  // namespace cropclust
