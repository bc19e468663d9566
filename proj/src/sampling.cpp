#include "acsim/sampling.hpp"

#include <stdexcept>

namespace acsim {

int enumerate_segments(int num_frames, int n) {
  if (n < 1)
    throw std::invalid_argument("enumerate_segments: clip length must be >= 1");
  if (n > num_frames)
    throw std::invalid_argument("enumerate_segments: clip longer than video");
  return num_frames - n + 1;
}

int continuous_start_count(int num_frames, int n, int stride) {
  if (stride < 1)
    throw std::invalid_argument("continuous: stride must be >= 1");
  const int span = (n - 1) * stride + 1;
  if (span > num_frames)
    throw std::invalid_argument("continuous: segment span exceeds video length");
  return num_frames - span + 1;
}

namespace {

ClipSample continuous_clip(const Video& video, int n, int stride, int start) {
  ClipSample clip;
  clip.video_id = video.id;
  clip.segment_index = start;
  clip.n = n;
  clip.frame_indices.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    clip.frame_indices.push_back(start + j * stride);
  return clip;
}

// Chunk j (1-based) of an n-way split of [lo, hi].
std::pair<int, int> chunk_bounds(int lo, int hi, int n, int j) {
  const std::int64_t len = hi - lo + 1;
  const int a = lo + static_cast<int>(static_cast<std::int64_t>(j - 1) * len / n);
  const int b = lo + static_cast<int>(static_cast<std::int64_t>(j) * len / n) - 1;
  return {a, b};
}

ClipSample sparse_clip(const Video& video, int n, int lo, int hi, Rng* rng) {
  ClipSample clip;
  clip.video_id = video.id;
  clip.segment_index = 0;
  clip.n = n;
  clip.frame_indices.reserve(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    const auto [a, b] = chunk_bounds(lo, hi, n, j);
    // Deterministic (test-time) draws take the lower midpoint of the chunk.
    const int f = rng ? static_cast<int>(rng->uniform_int(a, b)) : a + (b - a) / 2;
    clip.frame_indices.push_back(f);
  }
  return clip;
}

} // namespace

ClipSample sample_clip(const Video& video, const SamplerKind& kind, int n,
                       std::optional<int> segment, Rng& rng) {
  if (n < 1 || n > video.num_frames)
    throw std::invalid_argument("sample_clip: clip length out of range");
  if (kind.is_sparse())
    return sparse_clip(video, n, 1, video.num_frames, &rng);
  const int starts = continuous_start_count(video.num_frames, n, kind.stride);
  int start;
  if (segment) {
    start = *segment;
    if (start < 1 || start > starts)
      throw std::invalid_argument("sample_clip: segment index out of range");
  } else {
    start = static_cast<int>(rng.uniform_int(1, starts));
  }
  return continuous_clip(video, n, kind.stride, start);
}

std::vector<ClipSample> test_views(const Video& video, const SamplerKind& kind,
                                   int n, int num_views) {
  if (num_views != 1 && num_views != 10)
    throw std::invalid_argument("test_views: num_views must be 1 or 10");
  std::vector<ClipSample> views;
  if (kind.is_sparse()) {
    // Split the video into num_views equal spans; sparse-sample each span
    // deterministically.
    for (int v = 1; v <= num_views; ++v) {
      const auto [lo, hi] = chunk_bounds(1, video.num_frames, num_views, v);
      if (hi - lo + 1 < n)
        throw std::invalid_argument("test_views: span shorter than clip length");
      views.push_back(sparse_clip(video, n, lo, hi, nullptr));
    }
    return views;
  }
  const int starts = continuous_start_count(video.num_frames, n, kind.stride);
  if (num_views == 1) {
    const int central = (starts - 1) / 2 + 1;
    views.push_back(continuous_clip(video, n, kind.stride, central));
    return views;
  }
  for (int v = 0; v < num_views; ++v) {
    // Equal spacing over the feasible range, both extremes included; division
    // ties round down.
    const int start =
        1 + static_cast<int>(static_cast<std::int64_t>(v) * (starts - 1) /
                             (num_views - 1));
    views.push_back(continuous_clip(video, n, kind.stride, start));
  }
  return views;
}

} // namespace acsim
