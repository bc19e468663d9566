#pragma once

#include <cstdint>
#include <optional>

#include "acsim/acs.hpp"
#include "acsim/corpus.hpp"
#include "acsim/sampling.hpp"

namespace acsim {

enum class ConfidenceModel { Fixed, Calibrated };

// Stochastic classifier stand-in. Correctness probability is linear in the
// clip's ground-truth overlap: p(o) = p_bg + (p_fg - p_bg) * o. Confidence is
// either a fixed constant or calibrated: p(o) when correct and
// (1 - p(o)) / (C - 1) when wrong.
struct OracleConfig {
  double p_fg = 0.9;
  double p_bg = 0.1; // conventionally 1/C
  int num_classes = 2;
  ConfidenceModel confidence_model = ConfidenceModel::Calibrated;
  double fixed_confidence = 0.5; // Fixed model only
  // When set, p_fg ramps linearly from p_bg to its configured value over the
  // first ramp_epochs epochs (a crude stand-in for a network that learns).
  std::optional<int> ramp_epochs;

  void validate() const;
  double effective_p_fg(int epoch) const;
};

double clip_overlap(const ClipSample& clip, const Video& video);

PredictionFeedback predict(const ClipSample& clip, const Video& video,
                           const OracleConfig& cfg, int epoch, Rng& rng);

} // namespace acsim
