#include "acsim/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace acsim {

namespace {

// Shortest round-trip formatting keeps CSV output byte-stable.
std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[32];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
      std::sscanf(shorter, "%lf", &back);
      if (back == v)
        return shorter;
    }
  }
  return buf;
}

} // namespace

void SimConfig::validate() const {
  corpus.validate();
  acs.validate();
  if (epochs < 1)
    throw std::invalid_argument("SimConfig: epochs must be >= 1");
  if (repeats_per_video < 1)
    throw std::invalid_argument("SimConfig: repeats_per_video must be >= 1");
  if (clip_length < 1 || clip_length > corpus.frames_min)
    throw std::invalid_argument("SimConfig: clip length incompatible with corpus frame range");
  if (test_views != 1 && test_views != 10)
    throw std::invalid_argument("SimConfig: test_views must be 1 or 10");
  if (workers < 1)
    throw std::invalid_argument("SimConfig: workers must be >= 1");
  if (noise_threshold < 0.0 || noise_threshold > 1.0)
    throw std::invalid_argument("SimConfig: noise_threshold must lie in [0,1]");
}

Simulation::Simulation(const SimConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  cfg_.oracle.num_classes = cfg_.corpus.num_classes;
  cfg_.oracle.validate();
  const std::int64_t total_draws = static_cast<std::int64_t>(cfg_.epochs) *
                                   cfg_.corpus.num_videos *
                                   cfg_.repeats_per_video;
  if (cfg_.schedule.main_iters == 0)
    cfg_.schedule = SchedulePlan::for_total(total_draws);
  cfg_.schedule.validate();
  corpus_ = generate_corpus(cfg_.corpus);
  states_.reserve(corpus_.size());
  for (const Video& v : corpus_)
    states_.emplace_back(v.num_frames, cfg_.clip_length);
}

EpochRow Simulation::run_epoch(int epoch) {
  struct Partial {
    double overlap_sum = 0.0;
    std::int64_t noisy = 0;
    std::int64_t correct = 0;
    std::int64_t draws = 0;
    std::int64_t activated = 0;
    std::int64_t all_negative = 0;
  };

  const std::size_t num_videos = corpus_.size();
  const int workers = std::min<int>(cfg_.workers, static_cast<int>(num_videos));
  std::vector<Partial> partials(static_cast<std::size_t>(workers));

  auto process_range = [&](std::size_t lo, std::size_t hi, Partial& part) {
    for (std::size_t idx = lo; idx < hi; ++idx) {
      const Video& video = corpus_[idx];
      AcsState& state = states_[idx];
      Rng rng(substream_seed(cfg_.seed, 0x51ee, static_cast<std::uint64_t>(epoch),
                             static_cast<std::uint64_t>(video.id)));
      const bool dropped =
          cfg_.acs_enabled &&
          cfg_.acs.negative_video_mode == NegativeVideoMode::Ignore &&
          video_verdict(state, cfg_.acs) == VideoVerdict::AllNegative;
      if (!dropped) {
        for (int rep = 0; rep < cfg_.repeats_per_video; ++rep) {
          ClipSample clip;
          if (cfg_.acs_enabled) {
            // ACS operates on the stride-1 segment grid: uniform before
            // activation, score-weighted after.
            const int segment = draw_segment(state, cfg_.acs, video.num_frames, rng);
            clip = sample_clip(video, SamplerKind::continuous(1), cfg_.clip_length,
                               segment, rng);
          } else {
            clip = sample_clip(video, cfg_.sampler, cfg_.clip_length,
                               std::nullopt, rng);
          }
          const PredictionFeedback fb = predict(clip, video, cfg_.oracle, epoch, rng);
          const double overlap = clip_overlap(clip, video);
          part.overlap_sum += overlap;
          if (overlap < cfg_.noise_threshold)
            ++part.noisy;
          if (fb.correct())
            ++part.correct;
          ++part.draws;

          if (cfg_.acs_enabled && epoch >= cfg_.acs.warmup_epochs_excluded) {
            double weight = fb.predicted_confidence;
            if (cfg_.acs.update_weight == UpdateWeight::SelectionProbability)
              weight = segment_distribution(state, video.num_frames)
                           [static_cast<std::size_t>(fb.segment_index - 1)];
            update_scores(state, fb, weight);
            maybe_activate(state, cfg_.acs, epoch);
          }
        }
      }
      if (state.activated)
        ++part.activated;
      if (video_verdict(state, cfg_.acs) == VideoVerdict::AllNegative)
        ++part.all_negative;
    }
  };

  if (workers == 1) {
    process_range(0, num_videos, partials[0]);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      const std::size_t lo = num_videos * static_cast<std::size_t>(w) /
                             static_cast<std::size_t>(workers);
      const std::size_t hi = num_videos * static_cast<std::size_t>(w + 1) /
                             static_cast<std::size_t>(workers);
      threads.emplace_back(process_range, lo, hi,
                           std::ref(partials[static_cast<std::size_t>(w)]));
    }
    for (auto& t : threads)
      t.join();
  }

  Partial total;
  for (const Partial& p : partials) {
    total.overlap_sum += p.overlap_sum;
    total.noisy += p.noisy;
    total.correct += p.correct;
    total.draws += p.draws;
    total.activated += p.activated;
    total.all_negative += p.all_negative;
  }

  EpochRow row;
  row.epoch = epoch;
  if (total.draws > 0) {
    row.mean_overlap = total.overlap_sum / static_cast<double>(total.draws);
    row.noise_rate = static_cast<double>(total.noisy) / total.draws;
    row.oracle_top1 = static_cast<double>(total.correct) / total.draws;
  }
  const std::int64_t iter = static_cast<std::int64_t>(epoch) *
                            cfg_.corpus.num_videos * cfg_.repeats_per_video;
  row.lr = lr_at(std::min(iter, cfg_.schedule.total_iters()), cfg_.schedule);
  row.activated_fraction =
      static_cast<double>(total.activated) / static_cast<double>(num_videos);
  row.all_negative_fraction =
      static_cast<double>(total.all_negative) / static_cast<double>(num_videos);
  rows_.push_back(row);
  next_epoch_ = epoch + 1;
  return row;
}

SimReport Simulation::run() { return run_until(cfg_.epochs); }

SimReport Simulation::run_until(int stop_epoch) {
  stop_epoch = std::min(stop_epoch, cfg_.epochs);
  for (int epoch = next_epoch_; epoch < stop_epoch; ++epoch)
    run_epoch(epoch);
  SimReport report;
  report.rows = rows_;
  report.noise_threshold = cfg_.noise_threshold;
  if (!rows_.empty()) {
    report.final_mean_overlap = rows_.back().mean_overlap;
    report.final_noise_rate = rows_.back().noise_rate;
    report.final_top1 = rows_.back().oracle_top1;
  }
  return report;
}

void Simulation::restore(const SimCheckpoint& ckpt) {
  if (ckpt.video_ids.size() != corpus_.size())
    throw std::invalid_argument("restore: checkpoint corpus size mismatch");
  for (std::size_t i = 0; i < corpus_.size(); ++i) {
    if (ckpt.video_ids[i] != corpus_[i].id)
      throw std::invalid_argument("restore: checkpoint video id mismatch");
    if (ckpt.scores[i].size() != states_[i].scores.size())
      throw std::invalid_argument("restore: checkpoint score vector mismatch");
    states_[i].scores = ckpt.scores[i];
    states_[i].activated = ckpt.activated[i] != 0;
  }
  rows_ = ckpt.rows_so_far;
  next_epoch_ = ckpt.next_epoch;
}

SimCheckpoint Simulation::checkpoint() const {
  SimCheckpoint ckpt;
  ckpt.next_epoch = next_epoch_;
  ckpt.rows_so_far = rows_;
  for (std::size_t i = 0; i < corpus_.size(); ++i) {
    ckpt.video_ids.push_back(corpus_[i].id);
    ckpt.activated.push_back(states_[i].activated ? 1 : 0);
    ckpt.scores.push_back(states_[i].scores);
  }
  return ckpt;
}

SimReport run(const SimConfig& cfg) { return Simulation(cfg).run(); }

void SimReport::write_csv(std::ostream& out) const {
  out << "# acsim-sim-report v1 noise_threshold=" << fmt_double(noise_threshold)
      << "\n";
  out << "epoch,mean_overlap,noise_rate,oracle_top1,lr,activated_fraction,"
         "all_negative_fraction\n";
  for (const EpochRow& r : rows)
    out << r.epoch << ',' << fmt_double(r.mean_overlap) << ','
        << fmt_double(r.noise_rate) << ',' << fmt_double(r.oracle_top1) << ','
        << fmt_double(r.lr) << ',' << fmt_double(r.activated_fraction) << ','
        << fmt_double(r.all_negative_fraction) << "\n";
}

void SimReport::write_json(std::ostream& out) const {
  nlohmann::ordered_json j;
  j["schema"] = "acsim-sim-summary-v1";
  j["epochs"] = rows.size();
  j["noise_threshold"] = noise_threshold;
  j["final_mean_overlap"] = final_mean_overlap;
  j["final_noise_rate"] = final_noise_rate;
  j["final_top1"] = final_top1;
  out << j.dump(2) << "\n";
}

void SimCheckpoint::save(std::ostream& out) const {
  out << "# acsim-checkpoint v1\n";
  out << next_epoch << ' ' << video_ids.size() << ' ' << rows_so_far.size()
      << "\n";
  for (const EpochRow& r : rows_so_far)
    out << r.epoch << ' ' << fmt_double(r.mean_overlap) << ' '
        << fmt_double(r.noise_rate) << ' ' << fmt_double(r.oracle_top1) << ' '
        << fmt_double(r.lr) << ' ' << fmt_double(r.activated_fraction) << ' '
        << fmt_double(r.all_negative_fraction) << "\n";
  for (std::size_t i = 0; i < video_ids.size(); ++i) {
    out << video_ids[i] << ' ' << static_cast<int>(activated[i]) << ' '
        << scores[i].size();
    for (double v : scores[i])
      out << ' ' << fmt_double(v);
    out << "\n";
  }
}

SimCheckpoint SimCheckpoint::load(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header != "# acsim-checkpoint v1")
    throw std::runtime_error("checkpoint: bad header");
  SimCheckpoint ckpt;
  std::size_t videos = 0, rows = 0;
  if (!(in >> ckpt.next_epoch >> videos >> rows))
    throw std::runtime_error("checkpoint: bad counts");
  for (std::size_t r = 0; r < rows; ++r) {
    EpochRow row;
    if (!(in >> row.epoch >> row.mean_overlap >> row.noise_rate >>
          row.oracle_top1 >> row.lr >> row.activated_fraction >>
          row.all_negative_fraction))
      throw std::runtime_error("checkpoint: bad epoch row");
    ckpt.rows_so_far.push_back(row);
  }
  for (std::size_t i = 0; i < videos; ++i) {
    std::int64_t id = 0;
    int act = 0;
    std::size_t len = 0;
    if (!(in >> id >> act >> len))
      throw std::runtime_error("checkpoint: bad video record");
    std::vector<double> sc(len);
    for (double& v : sc)
      if (!(in >> v))
        throw std::runtime_error("checkpoint: truncated score vector");
    ckpt.video_ids.push_back(id);
    ckpt.activated.push_back(static_cast<char>(act));
    ckpt.scores.push_back(std::move(sc));
  }
  return ckpt;
}

EvalResult evaluate(const SimConfig& cfg, const std::vector<Video>& corpus,
                    int protocol_views) {
  if (corpus.empty())
    throw std::invalid_argument("evaluate: empty corpus");
  if (protocol_views != 1 && protocol_views != 10)
    throw std::invalid_argument("evaluate: protocol_views must be 1 or 10");
  OracleConfig oracle = cfg.oracle;
  oracle.num_classes = cfg.corpus.num_classes;
  oracle.validate();
  const int C = oracle.num_classes;
  std::int64_t top1 = 0, top5 = 0;
  for (const Video& video : corpus) {
    const auto views =
        test_views(video, cfg.sampler, cfg.clip_length, protocol_views);
    std::vector<double> class_scores(static_cast<std::size_t>(C), 0.0);
    for (std::size_t v = 0; v < views.size(); ++v) {
      Rng rng(substream_seed(cfg.seed, 0xe7a1,
                             static_cast<std::uint64_t>(video.id), v));
      const PredictionFeedback fb =
          predict(views[v], video, oracle, cfg.epochs, rng);
      // Per-view score vector: predicted class takes the confidence, the
      // remainder spreads evenly over the other classes.
      const double rest = (1.0 - fb.predicted_confidence) / (C - 1);
      for (int c = 0; c < C; ++c)
        class_scores[static_cast<std::size_t>(c)] +=
            c == fb.predicted_label ? fb.predicted_confidence : rest;
    }
    // Rank of the true label; ties resolve toward lower class index.
    const double own = class_scores[static_cast<std::size_t>(video.label)];
    int better = 0;
    for (int c = 0; c < C; ++c) {
      const double s = class_scores[static_cast<std::size_t>(c)];
      if (s > own || (s == own && c < video.label))
        ++better;
    }
    if (better == 0)
      ++top1;
    if (better < 5)
      ++top5;
  }
  EvalResult res;
  res.top1 = static_cast<double>(top1) / static_cast<double>(corpus.size());
  res.top5 = static_cast<double>(top5) / static_cast<double>(corpus.size());
  return res;
}

std::vector<AblationRow> ablate(
    const std::vector<std::pair<std::string, SimConfig>>& grid) {
  if (grid.empty())
    throw std::invalid_argument("ablate: empty grid");
  std::vector<AblationRow> rows;
  rows.reserve(grid.size());
  for (const auto& [name, cfg] : grid)
    rows.push_back({name, run(cfg)});
  return rows;
}

void write_ablation_csv(std::ostream& out, const std::vector<AblationRow>& rows) {
  out << "# acsim-ablation v1\n";
  out << "name,final_mean_overlap,final_noise_rate,final_top1\n";
  for (const AblationRow& r : rows)
    out << r.name << ',' << fmt_double(r.report.final_mean_overlap) << ','
        << fmt_double(r.report.final_noise_rate) << ','
        << fmt_double(r.report.final_top1) << "\n";
}

} // namespace acsim
