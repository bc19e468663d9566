#include "acsim/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "acsim/sampling.hpp"

namespace acsim {

int Video::gt_overlap_frames(int first, int last) const {
  const int lo = std::max(first, gt_start);
  const int hi = std::min(last, gt_end);
  return std::max(0, hi - lo + 1);
}

void Video::validate() const {
  if (num_frames < 1)
    throw std::invalid_argument("Video: num_frames must be >= 1");
  if (gt_start < 1 || gt_start > gt_end || gt_end > num_frames)
    throw std::invalid_argument("Video: gt interval must satisfy 1 <= l <= k <= N");
  if (static_cast<int>(frame_stats.size()) != num_frames)
    throw std::invalid_argument("Video: frame_stats size must equal num_frames");
  for (const auto& [mean, var] : frame_stats) {
    (void)mean;
    if (var <= 0.0)
      throw std::invalid_argument("Video: frame variance must be positive");
  }
}

void CorpusConfig::validate() const {
  if (num_videos < 1)
    throw std::invalid_argument("CorpusConfig: num_videos must be >= 1");
  if (frames_min < 1 || frames_min > frames_max)
    throw std::invalid_argument("CorpusConfig: frames_range must be ordered and positive");
  if (!(gt_fraction_min > 0.0) || gt_fraction_min > gt_fraction_max ||
      gt_fraction_max > 1.0)
    throw std::invalid_argument("CorpusConfig: gt_fraction_range must lie in (0,1] and be ordered");
  if (num_classes < 2)
    throw std::invalid_argument("CorpusConfig: num_classes must be >= 2");
}

void fill_frame_stats(Video& video) {
  Rng rng(substream_seed(video.stats_seed, 0xf5a7));
  video.frame_stats.clear();
  video.frame_stats.reserve(static_cast<std::size_t>(video.num_frames));
  for (int f = 0; f < video.num_frames; ++f) {
    const double mean = rng.uniform_real(-1.0, 1.0);
    const double variance = rng.uniform_real(0.25, 2.0);
    video.frame_stats.emplace_back(mean, variance);
  }
}

std::vector<Video> generate_corpus(const CorpusConfig& cfg) {
  cfg.validate();
  std::vector<Video> corpus;
  corpus.reserve(static_cast<std::size_t>(cfg.num_videos));
  for (int i = 0; i < cfg.num_videos; ++i) {
    // Per-video substream keeps the corpus independent of generation order.
    Rng rng(substream_seed(cfg.seed, 0xc0f9, static_cast<std::uint64_t>(i)));
    Video v;
    v.id = i;
    v.num_frames = static_cast<int>(rng.uniform_int(cfg.frames_min, cfg.frames_max));
    const double fraction =
        cfg.gt_fraction_min == cfg.gt_fraction_max
            ? cfg.gt_fraction_min
            : rng.uniform_real(cfg.gt_fraction_min, cfg.gt_fraction_max);
    int gt_len = static_cast<int>(std::lround(fraction * v.num_frames));
    gt_len = std::clamp(gt_len, 1, v.num_frames);
    v.gt_start = static_cast<int>(rng.uniform_int(1, v.num_frames - gt_len + 1));
    v.gt_end = v.gt_start + gt_len - 1;
    v.label = static_cast<int>(rng.uniform_int(0, cfg.num_classes - 1));
    v.stats_seed = rng.next_u64();
    fill_frame_stats(v);
    v.validate();
    corpus.push_back(std::move(v));
  }
  return corpus;
}

namespace {

double continuous_noise_rate(const Video& video, int n, int stride,
                             double threshold) {
  const int starts = continuous_start_count(video.num_frames, n, stride);
  int noisy = 0;
  for (int start = 1; start <= starts; ++start) {
    int hits = 0;
    for (int j = 0; j < n; ++j) {
      const int f = start + j * stride;
      if (f >= video.gt_start && f <= video.gt_end)
        ++hits;
    }
    if (static_cast<double>(hits) / n < threshold)
      ++noisy;
  }
  return static_cast<double>(noisy) / starts;
}

// Sparse draws one frame per chunk, so the gt hit count is Poisson-binomial
// over per-chunk hit probabilities; the below-threshold mass is exact.
double sparse_noise_rate(const Video& video, int n, double threshold) {
  const int N = video.num_frames;
  std::vector<double> dp(static_cast<std::size_t>(n) + 1, 0.0);
  dp[0] = 1.0;
  for (int j = 1; j <= n; ++j) {
    const int lo = static_cast<int>(static_cast<std::int64_t>(j - 1) * N / n) + 1;
    const int hi = static_cast<int>(static_cast<std::int64_t>(j) * N / n);
    const int size = hi - lo + 1;
    const int inside = video.gt_overlap_frames(lo, hi);
    const double p = static_cast<double>(inside) / size;
    for (int h = j; h >= 1; --h)
      dp[static_cast<std::size_t>(h)] =
          dp[static_cast<std::size_t>(h)] * (1.0 - p) +
          dp[static_cast<std::size_t>(h - 1)] * p;
    dp[0] *= 1.0 - p;
  }
  double below = 0.0;
  for (int h = 0; h <= n; ++h)
    if (static_cast<double>(h) / n < threshold)
      below += dp[static_cast<std::size_t>(h)];
  return below;
}

} // namespace

double induced_noise_rate(const Video& video, int n, const SamplerKind& kind,
                          double overlap_threshold) {
  if (n < 1 || n > video.num_frames)
    throw std::invalid_argument("induced_noise_rate: clip length out of range");
  if (overlap_threshold < 0.0 || overlap_threshold > 1.0)
    throw std::invalid_argument("induced_noise_rate: threshold must lie in [0,1]");
  if (kind.is_sparse())
    return sparse_noise_rate(video, n, overlap_threshold);
  return continuous_noise_rate(video, n, kind.stride, overlap_threshold);
}

void save_corpus(std::ostream& out, const std::vector<Video>& corpus,
                 int num_classes) {
  out << "# acsim-corpus v1\n" << num_classes << "\n";
  for (const Video& v : corpus)
    out << v.id << ' ' << v.num_frames << ' ' << v.gt_start << ' ' << v.gt_end
        << ' ' << v.label << ' ' << v.stats_seed << "\n";
}

std::vector<Video> load_corpus(std::istream& in, int* num_classes) {
  std::string header;
  if (!std::getline(in, header) || header != "# acsim-corpus v1")
    throw std::runtime_error("load_corpus: bad header");
  int classes = 0;
  if (!(in >> classes) || classes < 2)
    throw std::runtime_error("load_corpus: bad class count");
  if (num_classes)
    *num_classes = classes;
  std::vector<Video> corpus;
  Video v;
  while (in >> v.id >> v.num_frames >> v.gt_start >> v.gt_end >> v.label >>
         v.stats_seed) {
    fill_frame_stats(v);
    v.validate();
    corpus.push_back(v);
  }
  return corpus;
}

void save_corpus_file(const std::string& path, const std::vector<Video>& corpus,
                      int num_classes) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("save_corpus_file: cannot open " + path);
  save_corpus(out, corpus, num_classes);
}

std::vector<Video> load_corpus_file(const std::string& path, int* num_classes) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("load_corpus_file: cannot open " + path);
  return load_corpus(in, num_classes);
}

} // namespace acsim
