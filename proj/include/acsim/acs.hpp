#pragma once

#include <cstdint>
#include <vector>

#include "acsim/rng.hpp"

namespace acsim {

// Per-video Adaptive Clip Selection bookkeeping: one score per frame,
// accumulated from prediction feedback. Scores are stored unclipped (they may
// go negative); negatives are clipped only when segment weights are formed.
struct AcsState {
  std::vector<double> scores; // one per frame, init 0
  bool activated = false;
  int n = 0; // clip length the segment grid is built for

  AcsState() = default;
  AcsState(int num_frames, int clip_len)
      : scores(static_cast<std::size_t>(num_frames), 0.0), n(clip_len) {}

  int num_frames() const { return static_cast<int>(scores.size()); }
  double nonzero_fraction() const;
  bool all_negative() const; // every score strictly < 0
};

struct PredictionFeedback {
  int segment_index = 0;     // 1-based stride-1 segment the clip came from
  int predicted_label = 0;
  double predicted_confidence = 0.0; // in [0, 1]
  int true_label = 0;

  bool correct() const { return predicted_label == true_label; }
};

enum class NegativeVideoMode { Keep, Ignore };

// Which magnitude enters the score update: the classifier's predicted
// confidence (default reading) or the segment's current selection
// probability (comparison mode).
enum class UpdateWeight { PredictedConfidence, SelectionProbability };

struct AcsConfig {
  double activation_threshold = 0.70;
  int warmup_epochs_excluded = 1;
  NegativeVideoMode negative_video_mode = NegativeVideoMode::Keep;
  UpdateWeight update_weight = UpdateWeight::PredictedConfidence;

  void validate() const;
};

enum class VideoVerdict { Normal, AllNegative };

// Unnormalized segment weights w_i = sum_{k in S_i} max(v_k, 0) + 1 for the
// stride-1 segments of a video with num_frames frames. Running-window O(N).
std::vector<double> segment_weights(const AcsState& state, int num_frames);

// Normalized multinomial over segments; strictly positive by the +1 term.
std::vector<double> segment_distribution(const AcsState& state, int num_frames);

// Applies the score update for one feedback event: every frame of segment
// S_i moves by +weight on a correct prediction and -weight otherwise, where
// weight is fb.predicted_confidence (or a caller-supplied override for
// SelectionProbability mode).
void update_scores(AcsState& state, const PredictionFeedback& fb);
void update_scores(AcsState& state, const PredictionFeedback& fb,
                   double weight);

// Sets (and returns) the sticky activation flag: epoch must be past the
// excluded warmup epochs and the nonzero-score fraction at or above the
// threshold.
bool maybe_activate(AcsState& state, const AcsConfig& cfg, int current_epoch);

// Draws a 1-based segment index: uniform before activation, from the score
// distribution after.
int draw_segment(const AcsState& state, const AcsConfig& cfg, int num_frames,
                 Rng& rng);

VideoVerdict video_verdict(const AcsState& state, const AcsConfig& cfg);

} // namespace acsim
