#ifndef ADARADAR_TESTS_HELPERS_HPP
#define ADARADAR_TESTS_HELPERS_HPP

#include <vector>

#include "adaradar/rng.hpp"
#include "adaradar/tensor.hpp"

namespace adaradar::testing {

inline RadarTensor random_tensor(int channels, int height, int width,
                                 std::uint64_t seed, double scale = 1.0) {
  RadarTensor x = RadarTensor::zeros(channels, height, width);
  Rng rng(seed);
  for (float& v : x.data) v = static_cast<float>(scale * rng.normal());
  return x;
}

inline std::vector<double> random_block(int block_len, std::uint64_t seed) {
  std::vector<double> block(block_len);
  Rng rng(seed);
  for (double& v : block) v = rng.normal();
  return block;
}

// A scene whose energy concentrates in a handful of spectral bins: a few
// smooth point responses on a quiet background.
inline SceneSpec sparse_scene_spec(std::uint64_t seed, double noise_sigma = 0.0) {
  SceneSpec spec;
  spec.channels = 2;
  spec.height = 64;
  spec.width = 64;
  spec.noise_sigma = noise_sigma;
  spec.seed = seed;
  // targets sit at tile interiors for M = 8 so their responses stay compact
  spec.targets = {
      {12, 20, 40.0, 0.35},
      {35, 44, 25.0, -0.6},
      {51, 11, 32.0, 1.1},
  };
  return spec;
}

}  // namespace adaradar::testing

#endif  // ADARADAR_TESTS_HELPERS_HPP
