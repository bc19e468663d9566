#include "acsim/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace acsim {

void OracleConfig::validate() const {
  if (p_bg < 0.0 || p_bg > p_fg || p_fg > 1.0)
    throw std::invalid_argument("OracleConfig: need 0 <= p_bg <= p_fg <= 1");
  if (num_classes < 2)
    throw std::invalid_argument("OracleConfig: num_classes must be >= 2");
  if (confidence_model == ConfidenceModel::Fixed &&
      (!(fixed_confidence > 0.0) || fixed_confidence > 1.0))
    throw std::invalid_argument("OracleConfig: fixed confidence must lie in (0,1]");
  if (ramp_epochs && *ramp_epochs < 1)
    throw std::invalid_argument("OracleConfig: ramp_epochs must be >= 1");
}

double OracleConfig::effective_p_fg(int epoch) const {
  if (!ramp_epochs)
    return p_fg;
  const double t = std::min(1.0, static_cast<double>(epoch + 1) / *ramp_epochs);
  return p_bg + (p_fg - p_bg) * t;
}

double clip_overlap(const ClipSample& clip, const Video& video) {
  int hits = 0;
  for (int f : clip.frame_indices)
    if (f >= video.gt_start && f <= video.gt_end)
      ++hits;
  return static_cast<double>(hits) / clip.n;
}

PredictionFeedback predict(const ClipSample& clip, const Video& video,
                           const OracleConfig& cfg, int epoch, Rng& rng) {
  if (clip.video_id != video.id)
    throw std::invalid_argument("predict: clip does not belong to video");
  const double overlap = clip_overlap(clip, video);
  const double p = cfg.p_bg + (cfg.effective_p_fg(epoch) - cfg.p_bg) * overlap;

  PredictionFeedback fb;
  fb.segment_index = clip.segment_index;
  fb.true_label = video.label;
  const bool correct = rng.bernoulli(p);
  if (correct) {
    fb.predicted_label = video.label;
  } else {
    // Uniform over the remaining classes.
    int other = static_cast<int>(rng.uniform_int(0, cfg.num_classes - 2));
    if (other >= video.label)
      ++other;
    fb.predicted_label = other;
  }
  switch (cfg.confidence_model) {
  case ConfidenceModel::Fixed:
    fb.predicted_confidence = cfg.fixed_confidence;
    break;
  case ConfidenceModel::Calibrated:
    fb.predicted_confidence =
        correct ? p : (1.0 - p) / (cfg.num_classes - 1);
    break;
  }
  return fb;
}

} // namespace acsim
