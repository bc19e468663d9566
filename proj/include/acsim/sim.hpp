#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "acsim/acs.hpp"
#include "acsim/corpus.hpp"
#include "acsim/oracle.hpp"
#include "acsim/sampling.hpp"
#include "acsim/schedule.hpp"

namespace acsim {

struct SimConfig {
  CorpusConfig corpus;
  SamplerKind sampler = SamplerKind::continuous(1);
  int clip_length = 16;
  int epochs = 1;
  int repeats_per_video = 1; // clip draws per video per epoch
  bool acs_enabled = true;
  AcsConfig acs;
  OracleConfig oracle;
  SchedulePlan schedule; // sized from epochs*videos*repeats when main_iters==0
  int test_views = 1;    // 1 or 10
  std::uint64_t seed = 0;
  int workers = 1;
  // Reported induced-noise threshold; a drawn clip counts as noisy when its
  // gt overlap falls below this value. Echoed in every report header.
  double noise_threshold = 0.5;

  void validate() const;
};

struct EpochRow {
  int epoch = 0;
  double mean_overlap = 0.0;
  double noise_rate = 0.0; // fraction of draws with overlap < noise_threshold
  double oracle_top1 = 0.0;
  double lr = 0.0;
  double activated_fraction = 0.0;
  double all_negative_fraction = 0.0;
};

struct SimReport {
  std::vector<EpochRow> rows;
  double final_mean_overlap = 0.0;
  double final_noise_rate = 0.0;
  double final_top1 = 0.0;
  double noise_threshold = 0.5;

  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
};

// Resumable simulation state: per-video score vectors plus the epoch cursor.
// Substream seeding makes resumed runs byte-identical to uninterrupted ones.
struct SimCheckpoint {
  int next_epoch = 0;
  std::vector<std::int64_t> video_ids;
  std::vector<char> activated;
  std::vector<std::vector<double>> scores;
  std::vector<EpochRow> rows_so_far;

  void save(std::ostream& out) const;
  static SimCheckpoint load(std::istream& in);
};

class Simulation {
public:
  explicit Simulation(const SimConfig& cfg);

  // Runs the remaining epochs (all of them on a fresh simulation).
  SimReport run();

  // Runs remaining epochs up to (but not including) stop_epoch; the report
  // covers the rows produced so far.
  SimReport run_until(int stop_epoch);

  void restore(const SimCheckpoint& ckpt);
  SimCheckpoint checkpoint() const;

  const std::vector<Video>& corpus() const { return corpus_; }
  const std::vector<AcsState>& states() const { return states_; }

  // Runs a single epoch and appends its row; exposed for stepped drivers.
  EpochRow run_epoch(int epoch);

private:
  SimConfig cfg_;
  std::vector<Video> corpus_;
  std::vector<AcsState> states_;
  std::vector<EpochRow> rows_;
  int next_epoch_ = 0;
};

SimReport run(const SimConfig& cfg);

struct EvalResult {
  double top1 = 0.0;
  double top5 = 0.0;
};

// Test-protocol evaluation over a corpus: 1 view scores the central crop,
// 10 views average per-class scores over the deterministic views before the
// argmax. The per-view score vector assigns the predicted confidence to the
// predicted class and spreads the remainder evenly.
EvalResult evaluate(const SimConfig& cfg, const std::vector<Video>& corpus,
                    int protocol_views);

struct AblationRow {
  std::string name;
  SimReport report;
};

std::vector<AblationRow> ablate(
    const std::vector<std::pair<std::string, SimConfig>>& grid);

void write_ablation_csv(std::ostream& out, const std::vector<AblationRow>& rows);

} // namespace acsim
