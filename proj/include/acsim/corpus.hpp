#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "acsim/rng.hpp"

namespace acsim {

struct SamplerKind; // sampling.hpp

// A synthetic untrimmed video. Frame indices are 1-based everywhere in the
// public API; the ground-truth action interval [gt_start, gt_end] is
// inclusive on both ends. Pixel content is reduced to per-frame
// (mean, variance) statistics regenerated from stats_seed.
struct Video {
  std::int64_t id = 0;
  int num_frames = 0;            // N
  int gt_start = 0;              // l, 1-based
  int gt_end = 0;                // k, 1-based inclusive
  int label = 0;                 // class id in [0, num_classes)
  std::uint64_t stats_seed = 0;  // regenerates frame_stats
  std::vector<std::pair<double, double>> frame_stats; // (mean, variance)

  int gt_length() const { return gt_end - gt_start + 1; }

  // Whole frames of [first, last] falling inside the ground-truth interval.
  int gt_overlap_frames(int first, int last) const;

  void validate() const; // throws std::invalid_argument on broken invariants
};

struct CorpusConfig {
  int num_videos = 0;
  int frames_min = 0;
  int frames_max = 0;
  double gt_fraction_min = 0.0; // in (0, 1]
  double gt_fraction_max = 0.0;
  int num_classes = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Deterministic function of cfg: same cfg, same corpus.
std::vector<Video> generate_corpus(const CorpusConfig& cfg);

// Regenerates frame_stats for a video from its stats_seed; called by
// generate_corpus and by the deserializer.
void fill_frame_stats(Video& video);

// Exact fraction of clip placements whose frame overlap with the gt interval
// is below overlap_threshold (overlap fraction = shared frames / n).
// Continuous placements are enumerated directly; Sparse is evaluated in
// closed form over the per-chunk hit probabilities.
double induced_noise_rate(const Video& video, int n, const SamplerKind& kind,
                          double overlap_threshold);

// Line-oriented corpus serialization. Format (documented in README):
//   # acsim-corpus v1
//   <num_classes>
//   <id> <N> <l> <k> <y> <stats_seed>   (one line per video)
// frame_stats regenerate from stats_seed, so the round trip is lossless.
void save_corpus(std::ostream& out, const std::vector<Video>& corpus,
                 int num_classes);
std::vector<Video> load_corpus(std::istream& in, int* num_classes = nullptr);

void save_corpus_file(const std::string& path, const std::vector<Video>& corpus,
                      int num_classes);
std::vector<Video> load_corpus_file(const std::string& path,
                                    int* num_classes = nullptr);

} // namespace acsim
