#pragma once

#include <cstdint>
#include <vector>

#include "acsim/corpus.hpp"
#include "acsim/rng.hpp"
#include "acsim/sampling.hpp"

namespace acsim {

// A clip of rendered frames: n buffers of height x width doubles, row-major.
struct Clip {
  std::int64_t video_id = 0;
  std::vector<int> frame_indices;
  int height = 0;
  int width = 0;
  std::vector<std::vector<double>> frames; // frames[j][r * width + c]

  int num_frames() const { return static_cast<int>(frames.size()); }
  void check_shape() const; // throws on inconsistent buffers
};

// Renders a clip from a video's per-frame statistics: each pixel of frame f
// is drawn from Normal(mean_f, sqrt(var_f)) with a substream keyed on
// (stats_seed, frame index), so renders are reproducible per frame.
Clip render_clip(const Video& video, const std::vector<int>& frame_indices,
                 int height, int width);

enum class AugOp { RandomRotate, Crop, HorizontalFlip, CrossNorm, TemporalCrop };

// One AugMix-style chain: every branch applies the op list with its own
// random parameters to the same source sample. TemporalCrop re-draws the
// temporal window, so it may appear at most once per branch.
struct AugChain {
  std::vector<AugOp> ops;
  int branches = 1;
  double max_rotate_deg = 15.0;
  double min_crop_fraction = 0.8;

  void validate() const;
};

// Source material for a chain: the video plus the clip geometry to render.
struct AugSource {
  const Video* video = nullptr;
  int n = 0;
  int height = 0;
  int width = 0;
  SamplerKind kind = SamplerKind::continuous(1);
};

std::vector<Clip> augmix_views(const AugSource& source, const AugChain& chain,
                               Rng& rng);

// One branch of the chain applied to a base temporal window; a pure function
// of (source, base window, chain, rng state). augmix_views derives one rng
// substream per branch from the caller's rng.
Clip augmix_branch(const AugSource& source, const std::vector<int>& base_indices,
                   const AugChain& chain, Rng& rng);

// Per-frame affine mix with a single still image: f' = lambda*f + (1-lambda)*image.
Clip video_mixup(const Clip& clip, const std::vector<double>& image,
                 double lambda);

// Transfers donor first/second moments onto the clip, computed over all
// frames jointly: out = (x - mean(x)) / std(x) * sqrt(donor_var) + donor_mean.
Clip crossnorm(const Clip& target, double donor_mean, double donor_variance);

// Whole-clip moments (population variance).
std::pair<double, double> clip_moments(const Clip& clip);

// Individual geometric ops, exposed for tests. All preserve buffer shape;
// rotate and crop use nearest-neighbor resampling.
void apply_horizontal_flip(Clip& clip);
void apply_rotate(Clip& clip, double degrees);
void apply_crop_resize(Clip& clip, double fraction, double cx, double cy);

// Mean absolute difference between branch clips, logged by the simulator in
// place of a consistency loss.
double branch_divergence(const std::vector<Clip>& branches);

} // namespace acsim
