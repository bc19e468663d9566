#include "acsim/acs.hpp"

#include <algorithm>
#include <stdexcept>

#include "acsim/sampling.hpp"

namespace acsim {

double AcsState::nonzero_fraction() const {
  if (scores.empty())
    return 0.0;
  std::size_t nonzero = 0;
  for (double v : scores)
    if (v != 0.0)
      ++nonzero;
  return static_cast<double>(nonzero) / static_cast<double>(scores.size());
}

bool AcsState::all_negative() const {
  if (scores.empty())
    return false;
  return std::all_of(scores.begin(), scores.end(),
                     [](double v) { return v < 0.0; });
}

void AcsConfig::validate() const {
  if (!(activation_threshold > 0.0) || activation_threshold > 1.0)
    throw std::invalid_argument("AcsConfig: activation_threshold must lie in (0,1]");
  if (warmup_epochs_excluded < 0)
    throw std::invalid_argument("AcsConfig: warmup_epochs_excluded must be >= 0");
}

std::vector<double> segment_weights(const AcsState& state, int num_frames) {
  if (state.num_frames() != num_frames)
    throw std::invalid_argument("segment_weights: state sized for a different video");
  const int n = state.n;
  const int segments = enumerate_segments(num_frames, n);
  std::vector<double> weights(static_cast<std::size_t>(segments));
  // Running window over clipped scores; negatives contribute zero.
  auto clipped = [&](int frame) { // 1-based
    const double v = state.scores[static_cast<std::size_t>(frame - 1)];
    return v > 0.0 ? v : 0.0;
  };
  double window = 0.0;
  for (int f = 1; f <= n; ++f)
    window += clipped(f);
  weights[0] = window + 1.0;
  for (int i = 2; i <= segments; ++i) {
    window += clipped(i + n - 1) - clipped(i - 1);
    weights[static_cast<std::size_t>(i - 1)] = window + 1.0;
  }
  return weights;
}

std::vector<double> segment_distribution(const AcsState& state, int num_frames) {
  std::vector<double> weights = segment_weights(state, num_frames);
  double total = 0.0;
  for (double w : weights)
    total += w;
  for (double& w : weights)
    w /= total;
  return weights;
}

void update_scores(AcsState& state, const PredictionFeedback& fb) {
  update_scores(state, fb, fb.predicted_confidence);
}

void update_scores(AcsState& state, const PredictionFeedback& fb, double weight) {
  const int segments = enumerate_segments(state.num_frames(), state.n);
  if (fb.segment_index < 1 || fb.segment_index > segments)
    throw std::invalid_argument("update_scores: segment index out of range");
  const double delta = fb.correct() ? weight : -weight;
  for (int k = fb.segment_index; k < fb.segment_index + state.n; ++k)
    state.scores[static_cast<std::size_t>(k - 1)] += delta;
}

bool maybe_activate(AcsState& state, const AcsConfig& cfg, int current_epoch) {
  if (state.activated)
    return true;
  if (current_epoch < cfg.warmup_epochs_excluded)
    return false;
  if (state.nonzero_fraction() >= cfg.activation_threshold)
    state.activated = true;
  return state.activated;
}

int draw_segment(const AcsState& state, const AcsConfig& cfg, int num_frames,
                 Rng& rng) {
  (void)cfg;
  const int segments = enumerate_segments(num_frames, state.n);
  if (!state.activated)
    return static_cast<int>(rng.uniform_int(1, segments));
  const std::vector<double> weights = segment_weights(state, num_frames);
  return static_cast<int>(rng.discrete(weights)) + 1;
}

VideoVerdict video_verdict(const AcsState& state, const AcsConfig& cfg) {
  (void)cfg;
  return state.all_negative() ? VideoVerdict::AllNegative : VideoVerdict::Normal;
}

} // namespace acsim
