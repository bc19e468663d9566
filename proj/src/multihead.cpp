#include "acsim/multihead.hpp"

#include <stdexcept>

namespace acsim {

void JointBatch::validate(const std::vector<DatasetSpec>& datasets) const {
  std::map<int, int> classes;
  for (const auto& d : datasets)
    classes[d.dataset_id] = d.num_classes;
  for (const auto& s : samples) {
    if (!heads.count(s.dataset_id))
      throw std::invalid_argument("JointBatch: sample dataset has no head");
    auto it = classes.find(s.dataset_id);
    if (it == classes.end() || s.label < 0 || s.label >= it->second)
      throw std::invalid_argument("JointBatch: label out of range for dataset");
  }
}

JointBatch compose_batch(const std::vector<DatasetSpec>& datasets,
                         int batch_size, MixStrategy strategy, Rng& rng) {
  if (datasets.empty())
    throw std::invalid_argument("compose_batch: empty dataset list");
  if (batch_size < 1)
    throw std::invalid_argument("compose_batch: batch_size must be >= 1");
  std::int64_t total = 0;
  for (const auto& d : datasets) {
    if (d.size < 1)
      throw std::invalid_argument("compose_batch: dataset sizes must be >= 1");
    total += d.size;
  }

  JointBatch batch;
  for (std::size_t h = 0; h < datasets.size(); ++h)
    batch.heads[datasets[h].dataset_id] = static_cast<int>(h);

  batch.samples.reserve(static_cast<std::size_t>(batch_size));
  for (int slot = 0; slot < batch_size; ++slot) {
    std::size_t d;
    if (strategy == MixStrategy::Uniform) {
      d = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(datasets.size()) - 1));
    } else {
      // Proportional: a slot lands in dataset d with probability size_d/total.
      std::int64_t pick = rng.uniform_int(0, total - 1);
      d = 0;
      while (pick >= datasets[d].size) {
        pick -= datasets[d].size;
        ++d;
      }
    }
    BatchSample s;
    s.dataset_id = datasets[d].dataset_id;
    s.sample_id = rng.uniform_int(0, datasets[d].size - 1);
    s.label = static_cast<int>(rng.uniform_int(0, datasets[d].num_classes - 1));
    batch.samples.push_back(s);
  }
  batch.validate(datasets);
  return batch;
}

std::map<int, std::vector<bool>> route_masks(const JointBatch& batch) {
  std::map<int, std::vector<bool>> masks;
  for (const auto& [dataset_id, head_id] : batch.heads)
    masks[head_id].assign(batch.samples.size(), false);
  for (std::size_t i = 0; i < batch.samples.size(); ++i) {
    auto it = batch.heads.find(batch.samples[i].dataset_id);
    if (it == batch.heads.end())
      throw std::invalid_argument("route_masks: unknown dataset_id in batch");
    masks[it->second][i] = true;
  }
  return masks;
}

} // namespace acsim
