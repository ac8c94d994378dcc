#include <benchmark/benchmark.h>

#include "leafret/appearance.hpp"
#include "leafret/imaging.hpp"
#include "leafret/retrieval_index.hpp"
#include "leafret/segmentation.hpp"
#include "leafret/shape_descriptor.hpp"
#include "synthetic.hpp"

using namespace leafret;

namespace {

RasterImage leaf_image(int w, int h) {
    return testing::render_leaf(testing::make_species(3, 1), testing::random_pose(7), w, h);
}

void BM_median_filter(benchmark::State& state) {
    const int w = static_cast<int>(state.range(0));
    const BinaryMask m = segment_leaf(leaf_image(w, w * 3 / 4), {}).mask;
    for (auto _ : state) benchmark::DoNotOptimize(median_filter(m, 3));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.size()));
}
BENCHMARK(BM_median_filter)->Arg(160)->Arg(800);

void BM_morph_open(benchmark::State& state) {
    const RasterImage img = leaf_image(800, 600);
    const LeafRegion r = segment_leaf(img, {});
    const DiskSE se(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(morph_open(r.gray, se, r.mask));
}
BENCHMARK(BM_morph_open)->DenseRange(1, 4);

void BM_pf2(benchmark::State& state) {
    const int w = static_cast<int>(state.range(0));
    const BinaryMask m = segment_leaf(leaf_image(w, w * 3 / 4), {}).mask;
    for (auto _ : state) benchmark::DoNotOptimize(pf2(m, {}));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.count()));
}
BENCHMARK(BM_pf2)->Arg(160)->Arg(800);

void BM_segment_leaf(benchmark::State& state) {
    const int w = static_cast<int>(state.range(0));
    const RasterImage img = leaf_image(w, w * 3 / 4);
    for (auto _ : state) benchmark::DoNotOptimize(segment_leaf(img, {}));
}
BENCHMARK(BM_segment_leaf)->Arg(160)->Arg(800);

void BM_extract_features(benchmark::State& state) {
    const int w = static_cast<int>(state.range(0));
    const RasterImage img = leaf_image(w, w * 3 / 4);
    const PipelineConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(extract_features(img, cfg));
}
BENCHMARK(BM_extract_features)->Arg(160)->Arg(800)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
