#include "acsim/augment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acsim {

void Clip::check_shape() const {
  if (frames.empty() || height < 1 || width < 1)
    throw std::invalid_argument("Clip: empty or degenerate shape");
  const std::size_t expected =
      static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  for (const auto& f : frames)
    if (f.size() != expected)
      throw std::invalid_argument("Clip: inconsistent frame buffer size");
}

Clip render_clip(const Video& video, const std::vector<int>& frame_indices,
                 int height, int width) {
  Clip clip;
  clip.video_id = video.id;
  clip.frame_indices = frame_indices;
  clip.height = height;
  clip.width = width;
  clip.frames.reserve(frame_indices.size());
  for (int f : frame_indices) {
    if (f < 1 || f > video.num_frames)
      throw std::invalid_argument("render_clip: frame index out of range");
    const auto& [mean, var] = video.frame_stats[static_cast<std::size_t>(f - 1)];
    Rng rng(substream_seed(video.stats_seed, 0x9e0d, static_cast<std::uint64_t>(f)));
    std::vector<double> buf(static_cast<std::size_t>(height) * width);
    const double stddev = std::sqrt(var);
    for (double& px : buf)
      px = rng.normal(mean, stddev);
    clip.frames.push_back(std::move(buf));
  }
  clip.check_shape();
  return clip;
}

void AugChain::validate() const {
  if (branches < 1)
    throw std::invalid_argument("AugChain: need at least one branch");
  const auto temporal_crops =
      std::count(ops.begin(), ops.end(), AugOp::TemporalCrop);
  if (temporal_crops > 1)
    throw std::invalid_argument("AugChain: TemporalCrop may appear at most once");
  if (!(min_crop_fraction > 0.0) || min_crop_fraction > 1.0)
    throw std::invalid_argument("AugChain: min_crop_fraction must lie in (0,1]");
}

void apply_horizontal_flip(Clip& clip) {
  for (auto& frame : clip.frames)
    for (int r = 0; r < clip.height; ++r) {
      auto row = frame.begin() + static_cast<std::ptrdiff_t>(r) * clip.width;
      std::reverse(row, row + clip.width);
    }
}

void apply_rotate(Clip& clip, double degrees) {
  const double rad = degrees * M_PI / 180.0;
  const double c = std::cos(rad), s = std::sin(rad);
  const double cy = (clip.height - 1) / 2.0, cx = (clip.width - 1) / 2.0;
  for (auto& frame : clip.frames) {
    std::vector<double> out(frame.size(), 0.0);
    for (int r = 0; r < clip.height; ++r)
      for (int col = 0; col < clip.width; ++col) {
        // Inverse mapping with nearest-neighbor lookup.
        const double dy = r - cy, dx = col - cx;
        const int sr = static_cast<int>(std::lround(cy + c * dy + s * dx));
        const int sc = static_cast<int>(std::lround(cx - s * dy + c * dx));
        if (sr >= 0 && sr < clip.height && sc >= 0 && sc < clip.width)
          out[static_cast<std::size_t>(r) * clip.width + col] =
              frame[static_cast<std::size_t>(sr) * clip.width + sc];
      }
    frame = std::move(out);
  }
}

void apply_crop_resize(Clip& clip, double fraction, double cx, double cy) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("apply_crop_resize: fraction must lie in (0,1]");
  const int ch = std::max(1, static_cast<int>(std::lround(clip.height * fraction)));
  const int cw = std::max(1, static_cast<int>(std::lround(clip.width * fraction)));
  const int top = static_cast<int>(std::lround(cy * (clip.height - ch)));
  const int left = static_cast<int>(std::lround(cx * (clip.width - cw)));
  for (auto& frame : clip.frames) {
    std::vector<double> out(frame.size());
    for (int r = 0; r < clip.height; ++r)
      for (int col = 0; col < clip.width; ++col) {
        const int sr = top + std::min(ch - 1, r * ch / clip.height);
        const int sc = left + std::min(cw - 1, col * cw / clip.width);
        out[static_cast<std::size_t>(r) * clip.width + col] =
            frame[static_cast<std::size_t>(sr) * clip.width + sc];
      }
    frame = std::move(out);
  }
}

std::pair<double, double> clip_moments(const Clip& clip) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& frame : clip.frames) {
    for (double px : frame)
      sum += px;
    count += frame.size();
  }
  const double mean = sum / static_cast<double>(count);
  double sq = 0.0;
  for (const auto& frame : clip.frames)
    for (double px : frame)
      sq += (px - mean) * (px - mean);
  return {mean, sq / static_cast<double>(count)};
}

Clip crossnorm(const Clip& target, double donor_mean, double donor_variance) {
  if (!(donor_variance > 0.0))
    throw std::invalid_argument("crossnorm: donor variance must be positive");
  const auto [mean, var] = clip_moments(target);
  if (!(var > 0.0))
    throw std::invalid_argument("crossnorm: degenerate zero-variance clip");
  const double scale = std::sqrt(donor_variance) / std::sqrt(var);
  Clip out = target;
  for (auto& frame : out.frames)
    for (double& px : frame)
      px = (px - mean) * scale + donor_mean;
  return out;
}

Clip video_mixup(const Clip& clip, const std::vector<double>& image,
                 double lambda) {
  clip.check_shape();
  if (image.size() != static_cast<std::size_t>(clip.height) * clip.width)
    throw std::invalid_argument("video_mixup: image shape mismatch");
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("video_mixup: lambda must lie in [0,1]");
  Clip out = clip;
  for (auto& frame : out.frames)
    for (std::size_t i = 0; i < frame.size(); ++i)
      frame[i] = lambda * frame[i] + (1.0 - lambda) * image[i];
  return out;
}

Clip augmix_branch(const AugSource& source, const std::vector<int>& base_indices,
                   const AugChain& chain, Rng& rng) {
  const Video& video = *source.video;
  std::vector<int> indices = base_indices;
  for (AugOp op : chain.ops)
    if (op == AugOp::TemporalCrop)
      indices = sample_clip(video, source.kind, source.n, std::nullopt, rng)
                    .frame_indices;
  Clip clip = render_clip(video, indices, source.height, source.width);
  for (AugOp op : chain.ops) {
    switch (op) {
    case AugOp::RandomRotate:
      apply_rotate(clip, rng.uniform_real(-chain.max_rotate_deg,
                                          chain.max_rotate_deg));
      break;
    case AugOp::Crop:
      apply_crop_resize(clip, rng.uniform_real(chain.min_crop_fraction, 1.0),
                        rng.uniform_real(), rng.uniform_real());
      break;
    case AugOp::HorizontalFlip:
      if (rng.bernoulli(0.5))
        apply_horizontal_flip(clip);
      break;
    case AugOp::CrossNorm: {
      // Donor stats come from a random frame of the same video, per the
      // clip-statistics-pair formulation.
      const int f = static_cast<int>(rng.uniform_int(1, video.num_frames));
      const auto& [dm, dv] = video.frame_stats[static_cast<std::size_t>(f - 1)];
      clip = crossnorm(clip, dm, dv);
      break;
    }
    case AugOp::TemporalCrop:
      break; // handled above, before rendering
    }
  }
  return clip;
}

std::vector<Clip> augmix_views(const AugSource& source, const AugChain& chain,
                               Rng& rng) {
  chain.validate();
  if (!source.video)
    throw std::invalid_argument("augmix_views: missing source video");

  // The shared base window; branches without TemporalCrop reuse it.
  const ClipSample base =
      sample_clip(*source.video, source.kind, source.n, std::nullopt, rng);

  std::vector<Clip> views;
  views.reserve(static_cast<std::size_t>(chain.branches));
  for (int b = 0; b < chain.branches; ++b) {
    Rng branch_rng(rng.next_u64());
    views.push_back(augmix_branch(source, base.frame_indices, chain, branch_rng));
  }
  return views;
}

double branch_divergence(const std::vector<Clip>& branches) {
  if (branches.size() < 2)
    return 0.0;
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < branches.size(); ++a)
    for (std::size_t b = a + 1; b < branches.size(); ++b) {
      const auto& fa = branches[a].frames;
      const auto& fb = branches[b].frames;
      double acc = 0.0;
      std::size_t count = 0;
      for (std::size_t j = 0; j < fa.size() && j < fb.size(); ++j)
        for (std::size_t i = 0; i < fa[j].size(); ++i) {
          acc += std::abs(fa[j][i] - fb[j][i]);
          ++count;
        }
      if (count > 0) {
        total += acc / static_cast<double>(count);
        ++pairs;
      }
    }
  return pairs ? total / static_cast<double>(pairs) : 0.0;
}

} // namespace acsim
