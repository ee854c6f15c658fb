#ifndef ADARADAR_DCT_HPP
#define ADARADAR_DCT_HPP

#include <memory>
#include <span>
#include <vector>

#include "adaradar/tensor.hpp"

namespace adaradar {

// Orthonormal Type-II DCT over flattened M*M blocks. The 2-D transform is the
// Kronecker square of the 1-D orthonormal DCT-II, applied separably (rows,
// then columns); coefficient index m = M*u + v maps to 2-D frequency (u, v).
class DctBasis {
 public:
  explicit DctBasis(int block_side);

  int block_side() const { return side_; }
  int block_len() const { return side_ * side_; }

  // 1-D orthonormal DCT-II matrix, row-major [frequency][sample]:
  // C[u][i] = c(u) * cos((2i+1) u pi / 2M), c(0) = sqrt(1/M), else sqrt(2/M).
  const std::vector<double>& matrix() const { return matrix_; }

  // Process-wide cache, one basis per block side.
  static std::shared_ptr<const DctBasis> cached(int block_side);

 private:
  int side_;
  std::vector<double> matrix_;
};

// z = a (.) G x for the flattened block; accumulation in double.
// Throws DimensionError on length mismatch.
void dct_forward(std::span<const double> block, const DctBasis& basis,
                 std::span<double> coeffs);

// x = G^T (a (.) z), the exact inverse of dct_forward.
void dct_inverse(std::span<const double> coeffs, const DctBasis& basis,
                 std::span<double> block);

enum class TransformDirection { forward, inverse };

// Per-(channel, block) transform of a whole grid; float storage, double math.
BlockGrid transform_grid(const BlockGrid& grid, const DctBasis& basis,
                         TransformDirection direction);

}  // namespace adaradar

#endif  // ADARADAR_DCT_HPP
