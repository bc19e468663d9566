#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "acsim/corpus.hpp"
#include "acsim/rng.hpp"

namespace acsim {

// Frame sampling strategy. Continuous picks n consecutive frames at a fixed
// stride (fixed frame rate); Sparse picks one frame per equal temporal chunk
// for maximal coverage.
struct SamplerKind {
  enum class Variant { Sparse, Continuous };
  Variant variant = Variant::Continuous;
  int stride = 1; // Continuous only, >= 1

  static SamplerKind sparse() { return {Variant::Sparse, 1}; }
  static SamplerKind continuous(int stride = 1) {
    return {Variant::Continuous, stride};
  }
  bool is_sparse() const { return variant == Variant::Sparse; }
};

struct ClipSample {
  std::int64_t video_id = 0;
  int segment_index = 0; // 1-based start for Continuous; 0 for Sparse
  int n = 0;
  std::vector<int> frame_indices; // strictly increasing, 1-based
};

// Number of stride-1 segments S_1..S_{N-n+1}; S_i covers frames [i, i+n-1].
int enumerate_segments(int num_frames, int n);

// Feasible start positions for a continuous clip of length n at the given
// stride: starts 1..N-(n-1)*stride.
int continuous_start_count(int num_frames, int n, int stride);

ClipSample sample_clip(const Video& video, const SamplerKind& kind, int n,
                       std::optional<int> segment, Rng& rng);

// Deterministic test-time views; num_views must be 1 or 10. One view is the
// central temporal crop; ten views partition the feasible start range evenly,
// endpoints included. Sparse views take chunk midpoints within each span.
std::vector<ClipSample> test_views(const Video& video, const SamplerKind& kind,
                                   int n, int num_views);

} // namespace acsim
