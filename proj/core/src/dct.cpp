#include "adaradar/dct.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "adaradar/errors.hpp"

namespace adaradar {

namespace {

void check_len(std::size_t got, const DctBasis& basis) {
  if (got != static_cast<std::size_t>(basis.block_len())) {
    throw DimensionError("block length does not match basis M^2");
  }
}

// rows pass: tmp[i][v] = sum_j C[v][j] x[i][j]; columns pass:
// out[u][v] = sum_i C[u][i] tmp[i][v]. `transpose` flips C for the inverse.
void separable_apply(std::span<const double> in, const DctBasis& basis,
                     std::span<double> out, bool transpose) {
  const int m = basis.block_side();
  const std::vector<double>& c = basis.matrix();
  std::vector<double> tmp(static_cast<std::size_t>(m) * m);

  for (int i = 0; i < m; ++i) {
    for (int v = 0; v < m; ++v) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j) {
        const double w = transpose ? c[j * m + v] : c[v * m + j];
        acc += w * in[i * m + j];
      }
      tmp[static_cast<std::size_t>(i) * m + v] = acc;
    }
  }
  for (int v = 0; v < m; ++v) {
    for (int u = 0; u < m; ++u) {
      double acc = 0.0;
      for (int i = 0; i < m; ++i) {
        const double w = transpose ? c[i * m + u] : c[u * m + i];
        acc += w * tmp[static_cast<std::size_t>(i) * m + v];
      }
      out[u * m + v] = acc;
    }
  }
}

}  // namespace

DctBasis::DctBasis(int block_side) : side_(block_side) {
  if (block_side <= 0) throw InvalidArgument("block side must be positive");
  matrix_.resize(static_cast<std::size_t>(side_) * side_);
  const double norm0 = std::sqrt(1.0 / side_);
  const double norm = std::sqrt(2.0 / side_);
  for (int u = 0; u < side_; ++u) {
    for (int i = 0; i < side_; ++i) {
      matrix_[static_cast<std::size_t>(u) * side_ + i] =
          (u == 0 ? norm0 : norm) *
          std::cos((2.0 * i + 1.0) * u * M_PI / (2.0 * side_));
    }
  }
}

std::shared_ptr<const DctBasis> DctBasis::cached(int block_side) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const DctBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(block_side);
  if (it == cache.end()) {
    it = cache.emplace(block_side, std::make_shared<DctBasis>(block_side)).first;
  }
  return it->second;
}

void dct_forward(std::span<const double> block, const DctBasis& basis,
                 std::span<double> coeffs) {
  check_len(block.size(), basis);
  check_len(coeffs.size(), basis);
  separable_apply(block, basis, coeffs, /*transpose=*/false);
}

void dct_inverse(std::span<const double> coeffs, const DctBasis& basis,
                 std::span<double> block) {
  check_len(coeffs.size(), basis);
  check_len(block.size(), basis);
  separable_apply(coeffs, basis, block, /*transpose=*/true);
}

BlockGrid transform_grid(const BlockGrid& grid, const DctBasis& basis,
                         TransformDirection direction) {
  if (grid.block_len != basis.block_len() || grid.block_side != basis.block_side()) {
    throw DimensionError("grid block size does not match basis");
  }
  BlockGrid out = grid;
  std::vector<double> in_buf(grid.block_len);
  std::vector<double> out_buf(grid.block_len);
  for (int c = 0; c < grid.channels; ++c) {
    for (int b = 0; b < grid.blocks; ++b) {
      auto src = grid.block(c, b);
      for (int m = 0; m < grid.block_len; ++m) in_buf[m] = src[m];
      if (direction == TransformDirection::forward) {
        dct_forward(in_buf, basis, out_buf);
      } else {
        dct_inverse(in_buf, basis, out_buf);
      }
      auto dst = out.block(c, b);
      for (int m = 0; m < grid.block_len; ++m) {
        dst[m] = static_cast<float>(out_buf[m]);
      }
    }
  }
  return out;
}

}  // namespace adaradar
