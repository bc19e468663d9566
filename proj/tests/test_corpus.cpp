#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "acsim/corpus.hpp"
#include "acsim/sampling.hpp"
#include "stats_support.hpp"

using namespace acsim;

namespace {

CorpusConfig base_cfg() {
  CorpusConfig cfg;
  cfg.num_videos = 10;
  cfg.frames_min = 100;
  cfg.frames_max = 100;
  cfg.gt_fraction_min = 0.5;
  cfg.gt_fraction_max = 0.5;
  cfg.num_classes = 5;
  cfg.seed = 42;
  return cfg;
}

} // namespace

TEST_CASE("full-video gt fraction forces l=1, k=N") {
  CorpusConfig cfg = base_cfg();
  cfg.num_videos = 1;
  cfg.gt_fraction_min = cfg.gt_fraction_max = 1.0;
  const auto corpus = generate_corpus(cfg);
  REQUIRE(corpus.size() == 1);
  CHECK(corpus[0].gt_start == 1);
  CHECK(corpus[0].gt_end == 100);
}

TEST_CASE("generation is deterministic in the seed") {
  const auto a = generate_corpus(base_cfg());
  const auto b = generate_corpus(base_cfg());
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].num_frames == b[i].num_frames);
    CHECK(a[i].gt_start == b[i].gt_start);
    CHECK(a[i].gt_end == b[i].gt_end);
    CHECK(a[i].label == b[i].label);
    CHECK(a[i].stats_seed == b[i].stats_seed);
    CHECK(a[i].frame_stats == b[i].frame_stats);
  }
}

TEST_CASE("gt placement is uniform over valid offsets") {
  CorpusConfig cfg = base_cfg();
  cfg.num_videos = 20000;
  cfg.frames_min = cfg.frames_max = 200;
  cfg.gt_fraction_min = cfg.gt_fraction_max = 0.05;
  const auto corpus = generate_corpus(cfg);

  double len_sum = 0.0;
  // 191 valid offsets binned coarsely for the chi-square test.
  std::vector<std::int64_t> bins(10, 0);
  for (const Video& v : corpus) {
    len_sum += v.gt_length();
    REQUIRE(v.gt_start >= 1);
    REQUIRE(v.gt_start <= 191);
    // Bins of width 19 cover starts 1..190 evenly; fold 191 into the last.
    const int b = std::min(9, (v.gt_start - 1) / 19);
    ++bins[static_cast<std::size_t>(b)];
  }
  CHECK(len_sum / cfg.num_videos == doctest::Approx(10.0));
  // Expected bin mass: 19/191 each for bins 0..8, 20/191 for bin 9.
  std::int64_t total = cfg.num_videos;
  double stat = 0.0;
  for (int b = 0; b < 10; ++b) {
    const double expected = total * (b == 9 ? 20.0 : 19.0) / 191.0;
    const double d = bins[static_cast<std::size_t>(b)] - expected;
    stat += d * d / expected;
  }
  CHECK(acsim_test::chi2_pvalue(stat, 9) > 0.01);
}

TEST_CASE("induced_noise_rate: gt covering the video gives zero") {
  Video v;
  v.num_frames = 100;
  v.gt_start = 1;
  v.gt_end = 100;
  v.stats_seed = 1;
  fill_frame_stats(v);
  for (double thr : {0.1, 0.5, 1.0})
    CHECK(induced_noise_rate(v, 16, SamplerKind::continuous(1), thr) == 0.0);
}

TEST_CASE("induced_noise_rate matches exhaustive enumeration") {
  Video v;
  v.num_frames = 200;
  v.gt_start = 96; // length 10, centered
  v.gt_end = 105;
  v.stats_seed = 1;
  fill_frame_stats(v);

  // Independent enumeration of all 185 stride-1 placements.
  const int n = 16;
  int noisy = 0, total = 0;
  for (int start = 1; start <= 200 - n + 1; ++start) {
    int hits = 0;
    for (int f = start; f < start + n; ++f)
      if (f >= 96 && f <= 105)
        ++hits;
    if (hits < 8) // overlap fraction < 0.5 with n=16
      ++noisy;
    ++total;
  }
  REQUIRE(total == 185);
  const double expected = static_cast<double>(noisy) / total;
  CHECK(induced_noise_rate(v, n, SamplerKind::continuous(1), 0.5) ==
        doctest::Approx(expected));
}

TEST_CASE("short actions put the uniform strategy above 90% noise") {
  CorpusConfig cfg = base_cfg();
  cfg.num_videos = 200;
  cfg.frames_min = cfg.frames_max = 200;
  cfg.gt_fraction_min = cfg.gt_fraction_max = 0.02;
  const auto corpus = generate_corpus(cfg);
  double rate_sum = 0.0;
  for (const Video& v : corpus)
    rate_sum += induced_noise_rate(v, 16, SamplerKind::continuous(1), 0.5);
  CHECK(rate_sum / corpus.size() > 0.90);
}

TEST_CASE("induced_noise_rate is monotone non-increasing in gt_fraction") {
  double prev = 1.1;
  for (double frac : {0.02, 0.05, 0.1, 0.2, 0.4, 0.8, 1.0}) {
    Video v;
    v.num_frames = 200;
    const int len = std::max(1, static_cast<int>(frac * 200));
    v.gt_start = (200 - len) / 2 + 1;
    v.gt_end = v.gt_start + len - 1;
    v.stats_seed = 1;
    fill_frame_stats(v);
    const double rate = induced_noise_rate(v, 16, SamplerKind::continuous(1), 0.5);
    CHECK(rate <= prev);
    prev = rate;
  }
}

TEST_CASE("sparse noise rate agrees with monte carlo") {
  Video v;
  v.num_frames = 100;
  v.gt_start = 30;
  v.gt_end = 59;
  v.stats_seed = 7;
  fill_frame_stats(v);
  const int n = 8;
  const double exact = induced_noise_rate(v, n, SamplerKind::sparse(), 0.5);

  Rng rng(123);
  int noisy = 0;
  const int trials = 200000;
  for (int t = 0; t < trials; ++t) {
    const ClipSample clip = sample_clip(v, SamplerKind::sparse(), n, std::nullopt, rng);
    int hits = 0;
    for (int f : clip.frame_indices)
      if (f >= v.gt_start && f <= v.gt_end)
        ++hits;
    if (static_cast<double>(hits) / n < 0.5)
      ++noisy;
  }
  CHECK(static_cast<double>(noisy) / trials == doctest::Approx(exact).epsilon(0.02));
}

TEST_CASE("corpus serialization round-trips losslessly") {
  const auto corpus = generate_corpus(base_cfg());
  std::stringstream buf;
  save_corpus(buf, corpus, 5);
  int classes = 0;
  const auto loaded = load_corpus(buf, &classes);
  CHECK(classes == 5);
  REQUIRE(loaded.size() == corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(loaded[i].id == corpus[i].id);
    CHECK(loaded[i].num_frames == corpus[i].num_frames);
    CHECK(loaded[i].gt_start == corpus[i].gt_start);
    CHECK(loaded[i].gt_end == corpus[i].gt_end);
    CHECK(loaded[i].label == corpus[i].label);
    CHECK(loaded[i].frame_stats == corpus[i].frame_stats);
  }
}

TEST_CASE("config validation rejects broken ranges") {
  CorpusConfig cfg = base_cfg();
  cfg.gt_fraction_max = 1.5;
  CHECK_THROWS_AS(generate_corpus(cfg), std::invalid_argument);
  cfg = base_cfg();
  cfg.frames_min = 0;
  CHECK_THROWS_AS(generate_corpus(cfg), std::invalid_argument);
  cfg = base_cfg();
  cfg.num_classes = 1;
  CHECK_THROWS_AS(generate_corpus(cfg), std::invalid_argument);
}
