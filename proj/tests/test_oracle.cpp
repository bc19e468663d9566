#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "acsim/oracle.hpp"

using namespace acsim;

namespace {

Video make_video(int num_frames, int gt_start, int gt_end, int label = 3) {
  Video v;
  v.id = 1;
  v.num_frames = num_frames;
  v.gt_start = gt_start;
  v.gt_end = gt_end;
  v.label = label;
  v.stats_seed = 1;
  fill_frame_stats(v);
  return v;
}

ClipSample clip_at(const Video& v, int start, int n) {
  Rng rng(0);
  return sample_clip(v, SamplerKind::continuous(1), n, start, rng);
}

OracleConfig oracle_cfg(double p_fg, double p_bg, int classes = 10) {
  OracleConfig cfg;
  cfg.p_fg = p_fg;
  cfg.p_bg = p_bg;
  cfg.num_classes = classes;
  return cfg;
}

} // namespace

TEST_CASE("full overlap with p_fg=1 is always correct") {
  const Video v = make_video(100, 1, 100);
  const ClipSample clip = clip_at(v, 10, 16);
  const OracleConfig cfg = oracle_cfg(1.0, 0.1);
  Rng rng(5);
  for (int t = 0; t < 1000; ++t) {
    const auto fb = predict(clip, v, cfg, 0, rng);
    CHECK(fb.predicted_label == v.label);
  }
}

TEST_CASE("zero overlap hits at the background rate") {
  const Video v = make_video(200, 150, 160);
  const ClipSample clip = clip_at(v, 1, 16); // misses gt entirely
  const OracleConfig cfg = oracle_cfg(0.9, 0.1, 10);
  Rng rng(6);
  int correct = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t)
    correct += predict(clip, v, cfg, 0, rng).correct();
  CHECK(static_cast<double>(correct) / trials == doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("half overlap interpolates linearly") {
  const Video v = make_video(200, 100, 120);
  const ClipSample clip = clip_at(v, 92, 16); // frames 92..107, 8 inside gt
  REQUIRE(clip_overlap(clip, v) == doctest::Approx(0.5));
  const OracleConfig cfg = oracle_cfg(0.9, 0.1);
  Rng rng(7);
  int correct = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t)
    correct += predict(clip, v, cfg, 0, rng).correct();
  CHECK(static_cast<double>(correct) / trials == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("correctness probability is monotone in overlap") {
  const Video v = make_video(200, 100, 140);
  const OracleConfig cfg = oracle_cfg(0.9, 0.1);
  double prev = -1.0;
  for (int start : {1, 90, 100, 110}) {
    const ClipSample clip = clip_at(v, start, 16);
    Rng rng(8);
    int correct = 0;
    for (int t = 0; t < 20000; ++t)
      correct += predict(clip, v, cfg, 0, rng).correct();
    const double rate = correct / 20000.0;
    CHECK(rate >= prev - 0.02);
    prev = rate;
  }
}

TEST_CASE("wrong labels never equal the true label") {
  const Video v = make_video(100, 90, 95, 4);
  const ClipSample clip = clip_at(v, 1, 16);
  const OracleConfig cfg = oracle_cfg(0.9, 0.0, 5);
  Rng rng(9);
  for (int t = 0; t < 2000; ++t) {
    const auto fb = predict(clip, v, cfg, 0, rng);
    CHECK(fb.predicted_label != v.label); // p(o)=0 here, always wrong
    CHECK(fb.predicted_label >= 0);
    CHECK(fb.predicted_label < 5);
  }
}

TEST_CASE("feedback stream is reproducible from the seed") {
  const Video v = make_video(100, 20, 60);
  const ClipSample clip = clip_at(v, 10, 16);
  const OracleConfig cfg = oracle_cfg(0.8, 0.1);
  Rng a(42), b(42);
  for (int t = 0; t < 500; ++t) {
    const auto fa = predict(clip, v, cfg, 0, a);
    const auto fc = predict(clip, v, cfg, 0, b);
    CHECK(fa.predicted_label == fc.predicted_label);
    CHECK(fa.predicted_confidence == fc.predicted_confidence);
  }
}

TEST_CASE("fixed confidence model returns the constant") {
  const Video v = make_video(100, 20, 60);
  const ClipSample clip = clip_at(v, 10, 16);
  OracleConfig cfg = oracle_cfg(0.8, 0.1);
  cfg.confidence_model = ConfidenceModel::Fixed;
  cfg.fixed_confidence = 0.33;
  Rng rng(1);
  for (int t = 0; t < 100; ++t)
    CHECK(predict(clip, v, cfg, 0, rng).predicted_confidence == 0.33);
}

TEST_CASE("epoch ramp lifts accuracy toward p_fg") {
  const Video v = make_video(100, 1, 100); // full overlap
  const ClipSample clip = clip_at(v, 10, 16);
  OracleConfig cfg = oracle_cfg(0.9, 0.1);
  cfg.ramp_epochs = 10;
  CHECK(cfg.effective_p_fg(0) < cfg.effective_p_fg(5));
  CHECK(cfg.effective_p_fg(9) == doctest::Approx(0.9));
  CHECK(cfg.effective_p_fg(50) == doctest::Approx(0.9));
}

TEST_CASE("config validation") {
  OracleConfig cfg = oracle_cfg(0.5, 0.9); // p_bg > p_fg
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = oracle_cfg(0.9, 0.1, 1);
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
