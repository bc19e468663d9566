#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "acsim/rng.hpp"

namespace acsim {

struct DatasetSpec {
  int dataset_id = 0;
  std::int64_t size = 0;
  int num_classes = 1;
};

struct BatchSample {
  std::int64_t sample_id = 0;
  int dataset_id = 0;
  int label = 0;
};

// A batch drawn from the union of several datasets, with each dataset bound
// to its own classification head.
struct JointBatch {
  std::vector<BatchSample> samples;
  std::map<int, int> heads; // dataset_id -> head_id

  void validate(const std::vector<DatasetSpec>& datasets) const;
};

enum class MixStrategy { Proportional, Uniform };

JointBatch compose_batch(const std::vector<DatasetSpec>& datasets,
                         int batch_size, MixStrategy strategy, Rng& rng);

// Per-head boolean masks over the batch. Masks partition the batch: each
// sample is true in exactly the head of its dataset.
std::map<int, std::vector<bool>> route_masks(const JointBatch& batch);

} // namespace acsim
