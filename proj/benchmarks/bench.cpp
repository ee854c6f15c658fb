#include <benchmark/benchmark.h>

#include "adaradar/baselines.hpp"
#include "adaradar/codec.hpp"
#include "adaradar/dct.hpp"
#include "adaradar/oracle.hpp"
#include "adaradar/rng.hpp"
#include "adaradar/tensor.hpp"

namespace {

using namespace adaradar;

RadarTensor bench_scene(int channels, int height, int width) {
  SceneSpec spec;
  spec.channels = channels;
  spec.height = height;
  spec.width = width;
  spec.noise_sigma = 1.0;
  spec.seed = 42;
  spec.targets = {{height / 4, width / 4, 30.0, 0.4},
                  {height / 2, width / 2, 22.0, -0.7}};
  return generate_scene(spec).tensor;
}

void BM_DctForwardBlock(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const DctBasis basis(m);
  Rng rng(7);
  std::vector<double> block(static_cast<std::size_t>(m) * m);
  std::vector<double> coeffs(block.size());
  for (double& v : block) v = rng.normal();
  for (auto _ : state) {
    dct_forward(block, basis, coeffs);
    benchmark::DoNotOptimize(coeffs.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(block.size()));
}
BENCHMARK(BM_DctForwardBlock)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_EncodeFrame(benchmark::State& state) {
  const RadarTensor x = bench_scene(2, 128, 128);
  for (auto _ : state) {
    EncodedFrame frame = encode_frame(x, 12.0, 4, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(frame.records.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(x.size()));
}
BENCHMARK(BM_EncodeFrame)->Arg(8)->Arg(16)->Arg(32);

void BM_DecodeFrame(benchmark::State& state) {
  const RadarTensor x = bench_scene(2, 128, 128);
  const EncodedFrame frame = encode_frame(x, 12.0, 4, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    RadarTensor y = decode_frame(frame);
    benchmark::DoNotOptimize(y.data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(x.size()));
}
BENCHMARK(BM_DecodeFrame)->Arg(8)->Arg(16)->Arg(32);

void BM_Reprune(benchmark::State& state) {
  const RadarTensor x = bench_scene(2, 128, 128);
  const EncodedFrame frame = encode_frame(x, 8.0, 4, 8);
  for (auto _ : state) {
    EncodedFrame probe = reprune(frame, 8.05);
    benchmark::DoNotOptimize(probe.records.data());
  }
}
BENCHMARK(BM_Reprune);

void BM_SerializeFrame(benchmark::State& state) {
  const RadarTensor x = bench_scene(2, 128, 128);
  const EncodedFrame frame = encode_frame(x, 12.0, 4, 16);
  for (auto _ : state) {
    auto bytes = serialize_frame(frame);
    benchmark::DoNotOptimize(bytes.data());
  }
}
BENCHMARK(BM_SerializeFrame);

void BM_CfarDetect(benchmark::State& state) {
  const RadarTensor x = bench_scene(2, 128, 128);
  const auto power = power_map(x);
  const CfarConfig cfg;
  for (auto _ : state) {
    auto mask = cfar_detect(power, 128, 128, cfg);
    benchmark::DoNotOptimize(mask.data());
  }
  state.SetItemsProcessed(state.iterations() * 128 * 128);
}
BENCHMARK(BM_CfarDetect);

void BM_DetectOracle(benchmark::State& state) {
  const RadarTensor x = bench_scene(2, 128, 128);
  const OracleConfig cfg;
  for (auto _ : state) {
    auto proposals = detect(x, cfg);
    benchmark::DoNotOptimize(proposals.data());
  }
}
BENCHMARK(BM_DetectOracle);

}  // namespace

BENCHMARK_MAIN();
