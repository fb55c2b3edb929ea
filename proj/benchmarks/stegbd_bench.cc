#include <benchmark/benchmark.h>

#include "stegbd/mlp.h"
#include "stegbd/poisoner.h"
#include "stegbd/stego.h"
#include "test_support.h"

namespace stegbd {
namespace {

void BM_Fdct(benchmark::State& state) {
  Rng rng(1);
  const PixelBlock b = testing::random_block(rng);
  for (auto _ : state) benchmark::DoNotOptimize(fdct(b));
}
BENCHMARK(BM_Fdct);

void BM_Idct(benchmark::State& state) {
  Rng rng(2);
  const CoeffBlock j = fdct(testing::random_block(rng));
  for (auto _ : state) benchmark::DoNotOptimize(idct(j));
}
BENCHMARK(BM_Idct);

void BM_Embed(benchmark::State& state) {
  const RasterImage img = testing::random_image(3);
  const int bpb = static_cast<int>(state.range(0));
  const EmbedSpec spec{Channel::kRed, std::vector<std::uint8_t>(2 * bpb, 0xA5),
                       kDefaultDelta, default_positions(bpb)};
  for (auto _ : state) benchmark::DoNotOptimize(embed(img, spec));
}
BENCHMARK(BM_Embed)->Arg(1)->Arg(2);

void BM_Poison(benchmark::State& state) {
  const LabeledDataset ds = synth_dataset(4, 600, 6, 32, 32);
  const AttackConfig cfg = default_attack(AttackMode::kNtoN);
  for (auto _ : state) benchmark::DoNotOptimize(poison(ds, cfg));
}
BENCHMARK(BM_Poison)->Unit(benchmark::kMillisecond);

void BM_Forward(benchmark::State& state) {
  const MlpModel m = init_model(3 * 32 * 32, 128, 6, 5);
  const RasterImage img = testing::random_image(6);
  for (auto _ : state) benchmark::DoNotOptimize(forward(m, img));
}
BENCHMARK(BM_Forward);

void BM_TrainEpoch(benchmark::State& state) {
  const LabeledDataset ds = synth_dataset(7, 320, 6, 32, 32);
  TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train(ds, cfg));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace stegbd

BENCHMARK_MAIN();
