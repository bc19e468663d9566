// Python bindings for the core simulator operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "acsim/augment.hpp"
#include "acsim/multihead.hpp"
#include "acsim/sim.hpp"

namespace py = pybind11;
using namespace acsim;

namespace {

SamplerKind make_sampler(const std::string& name, int stride) {
  if (name == "sparse")
    return SamplerKind::sparse();
  if (name == "continuous")
    return SamplerKind::continuous(stride);
  throw std::invalid_argument("sampler must be 'sparse' or 'continuous'");
}

} // namespace

PYBIND11_MODULE(_acsim, m) {
  m.doc() = "Adaptive clip selection training-data simulator";

  py::class_<Video>(m, "Video")
      .def_readonly("id", &Video::id)
      .def_readonly("num_frames", &Video::num_frames)
      .def_readonly("gt_start", &Video::gt_start)
      .def_readonly("gt_end", &Video::gt_end)
      .def_readonly("label", &Video::label)
      .def_readonly("frame_stats", &Video::frame_stats)
      .def("gt_length", &Video::gt_length);

  py::class_<CorpusConfig>(m, "CorpusConfig")
      .def(py::init([](int num_videos, std::pair<int, int> frames,
                       std::pair<double, double> gt_fraction, int num_classes,
                       std::uint64_t seed) {
             CorpusConfig cfg;
             cfg.num_videos = num_videos;
             cfg.frames_min = frames.first;
             cfg.frames_max = frames.second;
             cfg.gt_fraction_min = gt_fraction.first;
             cfg.gt_fraction_max = gt_fraction.second;
             cfg.num_classes = num_classes;
             cfg.seed = seed;
             cfg.validate();
             return cfg;
           }),
           py::arg("num_videos"), py::arg("frames"), py::arg("gt_fraction"),
           py::arg("num_classes") = 10, py::arg("seed") = 0);

  m.def("generate_corpus", &generate_corpus, py::arg("config"));
  m.def(
      "induced_noise_rate",
      [](const Video& video, int n, const std::string& sampler, int stride,
         double threshold) {
        return induced_noise_rate(video, n, make_sampler(sampler, stride),
                                  threshold);
      },
      py::arg("video"), py::arg("n"), py::arg("sampler") = "continuous",
      py::arg("stride") = 1, py::arg("threshold") = 0.5);

  py::class_<ClipSample>(m, "ClipSample")
      .def_readonly("video_id", &ClipSample::video_id)
      .def_readonly("segment_index", &ClipSample::segment_index)
      .def_readonly("n", &ClipSample::n)
      .def_readonly("frame_indices", &ClipSample::frame_indices);

  m.def("enumerate_segments", &enumerate_segments, py::arg("num_frames"),
        py::arg("n"));
  m.def(
      "sample_clip",
      [](const Video& video, const std::string& sampler, int stride, int n,
         std::optional<int> segment, std::uint64_t seed) {
        Rng rng(seed);
        return sample_clip(video, make_sampler(sampler, stride), n, segment, rng);
      },
      py::arg("video"), py::arg("sampler"), py::arg("stride"), py::arg("n"),
      py::arg("segment") = std::nullopt, py::arg("seed") = 0);
  m.def(
      "test_views",
      [](const Video& video, const std::string& sampler, int stride, int n,
         int num_views) {
        return test_views(video, make_sampler(sampler, stride), n, num_views);
      },
      py::arg("video"), py::arg("sampler"), py::arg("stride"), py::arg("n"),
      py::arg("num_views"));

  py::class_<AcsState>(m, "AcsState")
      .def(py::init<int, int>(), py::arg("num_frames"), py::arg("clip_length"))
      .def_readwrite("scores", &AcsState::scores)
      .def_readwrite("activated", &AcsState::activated)
      .def("nonzero_fraction", &AcsState::nonzero_fraction)
      .def("all_negative", &AcsState::all_negative);

  py::class_<AcsConfig>(m, "AcsConfig")
      .def(py::init<>())
      .def_readwrite("activation_threshold", &AcsConfig::activation_threshold)
      .def_readwrite("warmup_epochs_excluded", &AcsConfig::warmup_epochs_excluded);

  py::class_<PredictionFeedback>(m, "PredictionFeedback")
      .def(py::init([](int segment_index, int predicted_label,
                       double predicted_confidence, int true_label) {
             return PredictionFeedback{segment_index, predicted_label,
                                       predicted_confidence, true_label};
           }),
           py::arg("segment_index"), py::arg("predicted_label"),
           py::arg("predicted_confidence"), py::arg("true_label"))
      .def_readonly("segment_index", &PredictionFeedback::segment_index)
      .def_readonly("predicted_label", &PredictionFeedback::predicted_label)
      .def_readonly("predicted_confidence",
                    &PredictionFeedback::predicted_confidence)
      .def_readonly("true_label", &PredictionFeedback::true_label)
      .def("correct", &PredictionFeedback::correct);

  m.def("segment_weights", &segment_weights, py::arg("state"),
        py::arg("num_frames"));
  m.def("segment_distribution", &segment_distribution, py::arg("state"),
        py::arg("num_frames"));
  m.def(
      "update_scores",
      [](AcsState& state, const PredictionFeedback& fb) {
        update_scores(state, fb);
      },
      py::arg("state"), py::arg("feedback"));
  m.def("maybe_activate", &maybe_activate, py::arg("state"), py::arg("config"),
        py::arg("current_epoch"));
  m.def(
      "draw_segment",
      [](const AcsState& state, const AcsConfig& cfg, int num_frames,
         std::uint64_t seed) {
        Rng rng(seed);
        return draw_segment(state, cfg, num_frames, rng);
      },
      py::arg("state"), py::arg("config"), py::arg("num_frames"),
      py::arg("seed") = 0);

  py::class_<SchedulePlan>(m, "SchedulePlan")
      .def(py::init<>())
      .def_readwrite("head_only_iters", &SchedulePlan::head_only_iters)
      .def_readwrite("warmup_iters", &SchedulePlan::warmup_iters)
      .def_readwrite("main_iters", &SchedulePlan::main_iters)
      .def_readwrite("eta_min", &SchedulePlan::eta_min)
      .def_readwrite("eta_max", &SchedulePlan::eta_max)
      .def_readwrite("alpha", &SchedulePlan::alpha)
      .def("total_iters", &SchedulePlan::total_iters)
      .def_static("for_total", &SchedulePlan::for_total, py::arg("total"));
  m.def("lr_main", &lr_main, py::arg("t_cur"), py::arg("plan"));
  m.def("lr_at", &lr_at, py::arg("t"), py::arg("plan"));

  py::class_<EpochRow>(m, "EpochRow")
      .def_readonly("epoch", &EpochRow::epoch)
      .def_readonly("mean_overlap", &EpochRow::mean_overlap)
      .def_readonly("noise_rate", &EpochRow::noise_rate)
      .def_readonly("oracle_top1", &EpochRow::oracle_top1)
      .def_readonly("lr", &EpochRow::lr)
      .def_readonly("activated_fraction", &EpochRow::activated_fraction)
      .def_readonly("all_negative_fraction", &EpochRow::all_negative_fraction);

  py::class_<SimReport>(m, "SimReport")
      .def_readonly("rows", &SimReport::rows)
      .def_readonly("final_mean_overlap", &SimReport::final_mean_overlap)
      .def_readonly("final_noise_rate", &SimReport::final_noise_rate)
      .def_readonly("final_top1", &SimReport::final_top1)
      .def("to_csv", [](const SimReport& r) {
        std::ostringstream out;
        r.write_csv(out);
        return out.str();
      });

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("corpus", &SimConfig::corpus)
      .def_readwrite("clip_length", &SimConfig::clip_length)
      .def_readwrite("epochs", &SimConfig::epochs)
      .def_readwrite("acs_enabled", &SimConfig::acs_enabled)
      .def_readwrite("acs", &SimConfig::acs)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("workers", &SimConfig::workers)
      .def_property(
          "sampler",
          [](const SimConfig& cfg) {
            return cfg.sampler.is_sparse() ? "sparse" : "continuous";
          },
          [](SimConfig& cfg, const std::string& name) {
            cfg.sampler = make_sampler(name, cfg.sampler.stride);
          })
      .def_property(
          "oracle_p_fg", [](const SimConfig& cfg) { return cfg.oracle.p_fg; },
          [](SimConfig& cfg, double v) { cfg.oracle.p_fg = v; })
      .def_property(
          "oracle_p_bg", [](const SimConfig& cfg) { return cfg.oracle.p_bg; },
          [](SimConfig& cfg, double v) { cfg.oracle.p_bg = v; });

  m.def("run", &acsim::run, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "evaluate",
      [](const SimConfig& cfg, const std::vector<Video>& corpus, int views) {
        const EvalResult res = evaluate(cfg, corpus, views);
        return std::make_pair(res.top1, res.top5);
      },
      py::arg("config"), py::arg("corpus"), py::arg("views"));

  py::class_<DatasetSpec>(m, "DatasetSpec")
      .def(py::init([](int dataset_id, std::int64_t size, int num_classes) {
             return DatasetSpec{dataset_id, size, num_classes};
           }),
           py::arg("dataset_id"), py::arg("size"), py::arg("num_classes"));
  m.def(
      "compose_batch",
      [](const std::vector<DatasetSpec>& datasets, int batch_size,
         const std::string& strategy, std::uint64_t seed) {
        Rng rng(seed);
        const JointBatch batch = compose_batch(
            datasets, batch_size,
            strategy == "uniform" ? MixStrategy::Uniform
                                  : MixStrategy::Proportional,
            rng);
        std::vector<std::tuple<std::int64_t, int, int>> out;
        for (const auto& s : batch.samples)
          out.emplace_back(s.sample_id, s.dataset_id, s.label);
        return out;
      },
      py::arg("datasets"), py::arg("batch_size"),
      py::arg("strategy") = "proportional", py::arg("seed") = 0);
}
