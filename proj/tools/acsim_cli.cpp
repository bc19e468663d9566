// acsim command-line driver: corpus generation, simulation runs, ablation
// grids, schedule dumps and evaluation. Every run writes a manifest with the
// fully resolved configuration before producing results; a run repeated from
// its manifest reproduces the outputs byte for byte.

#include <chrono>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acsim/corpus.hpp"
#include "acsim/sim.hpp"

namespace {

constexpr const char* kToolVersion = "acsim 1.0.0";
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

using OptionMap = std::map<std::string, std::string>;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct SimOptions {
  int videos = 200;
  int frames_min = 200;
  int frames_max = 200;
  double gt_frac_min = 0.1;
  double gt_frac_max = 0.1;
  int classes = 10;
  std::uint64_t seed = 1;
  int clip_length = 16;
  int epochs = 50;
  int repeats = 1;
  std::string acs = "on";
  std::string sampler = "continuous";
  int stride = 1;
  int views = 1;
  std::string negative_mode = "keep";
  double activation_threshold = 0.70;
  std::string update_weight = "confidence";
  double p_fg = 0.9;
  double p_bg = 0.1;
  std::string confidence = "calibrated";
  double fixed_confidence = 0.5;
  int ramp_epochs = 0; // 0 disables the ramp
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  double noise_threshold = 0.5;

  OptionMap to_map() const {
    return {
        {"videos", std::to_string(videos)},
        {"frames_min", std::to_string(frames_min)},
        {"frames_max", std::to_string(frames_max)},
        {"gt_frac_min", fmt(gt_frac_min)},
        {"gt_frac_max", fmt(gt_frac_max)},
        {"classes", std::to_string(classes)},
        {"seed", std::to_string(seed)},
        {"clip_length", std::to_string(clip_length)},
        {"epochs", std::to_string(epochs)},
        {"repeats", std::to_string(repeats)},
        {"acs", acs},
        {"sampler", sampler},
        {"stride", std::to_string(stride)},
        {"views", std::to_string(views)},
        {"negative_mode", negative_mode},
        {"activation_threshold", fmt(activation_threshold)},
        {"update_weight", update_weight},
        {"p_fg", fmt(p_fg)},
        {"p_bg", fmt(p_bg)},
        {"confidence", confidence},
        {"fixed_confidence", fmt(fixed_confidence)},
        {"ramp_epochs", std::to_string(ramp_epochs)},
        {"workers", std::to_string(workers)},
        {"noise_threshold", fmt(noise_threshold)},
    };
  }

  void apply(const OptionMap& m) {
    auto get = [&](const std::string& key) -> const std::string* {
      auto it = m.find(key);
      return it == m.end() ? nullptr : &it->second;
    };
    if (auto* v = get("videos")) videos = std::stoi(*v);
    if (auto* v = get("frames_min")) frames_min = std::stoi(*v);
    if (auto* v = get("frames_max")) frames_max = std::stoi(*v);
    if (auto* v = get("gt_frac_min")) gt_frac_min = std::stod(*v);
    if (auto* v = get("gt_frac_max")) gt_frac_max = std::stod(*v);
    if (auto* v = get("classes")) classes = std::stoi(*v);
    if (auto* v = get("seed")) seed = std::stoull(*v);
    if (auto* v = get("clip_length")) clip_length = std::stoi(*v);
    if (auto* v = get("epochs")) epochs = std::stoi(*v);
    if (auto* v = get("repeats")) repeats = std::stoi(*v);
    if (auto* v = get("acs")) acs = *v;
    if (auto* v = get("sampler")) sampler = *v;
    if (auto* v = get("stride")) stride = std::stoi(*v);
    if (auto* v = get("views")) views = std::stoi(*v);
    if (auto* v = get("negative_mode")) negative_mode = *v;
    if (auto* v = get("activation_threshold")) activation_threshold = std::stod(*v);
    if (auto* v = get("update_weight")) update_weight = *v;
    if (auto* v = get("p_fg")) p_fg = std::stod(*v);
    if (auto* v = get("p_bg")) p_bg = std::stod(*v);
    if (auto* v = get("confidence")) confidence = *v;
    if (auto* v = get("fixed_confidence")) fixed_confidence = std::stod(*v);
    if (auto* v = get("ramp_epochs")) ramp_epochs = std::stoi(*v);
    if (auto* v = get("workers")) workers = std::stoi(*v);
    if (auto* v = get("noise_threshold")) noise_threshold = std::stod(*v);
  }

  acsim::SimConfig to_config() const {
    acsim::SimConfig cfg;
    cfg.corpus.num_videos = videos;
    cfg.corpus.frames_min = frames_min;
    cfg.corpus.frames_max = frames_max;
    cfg.corpus.gt_fraction_min = gt_frac_min;
    cfg.corpus.gt_fraction_max = gt_frac_max;
    cfg.corpus.num_classes = classes;
    cfg.corpus.seed = seed;
    cfg.clip_length = clip_length;
    cfg.epochs = epochs;
    cfg.repeats_per_video = repeats;
    if (acs == "on")
      cfg.acs_enabled = true;
    else if (acs == "off")
      cfg.acs_enabled = false;
    else
      throw std::invalid_argument("--acs must be on or off");
    if (sampler == "sparse")
      cfg.sampler = acsim::SamplerKind::sparse();
    else if (sampler == "continuous")
      cfg.sampler = acsim::SamplerKind::continuous(stride);
    else
      throw std::invalid_argument("--sampler must be sparse or continuous");
    if (negative_mode == "keep")
      cfg.acs.negative_video_mode = acsim::NegativeVideoMode::Keep;
    else if (negative_mode == "ignore")
      cfg.acs.negative_video_mode = acsim::NegativeVideoMode::Ignore;
    else
      throw std::invalid_argument("--negative-mode must be keep or ignore");
    cfg.acs.activation_threshold = activation_threshold;
    if (update_weight == "confidence")
      cfg.acs.update_weight = acsim::UpdateWeight::PredictedConfidence;
    else if (update_weight == "selection-prob")
      cfg.acs.update_weight = acsim::UpdateWeight::SelectionProbability;
    else
      throw std::invalid_argument("--update-weight must be confidence or selection-prob");
    cfg.oracle.p_fg = p_fg;
    cfg.oracle.p_bg = p_bg;
    if (confidence == "fixed")
      cfg.oracle.confidence_model = acsim::ConfidenceModel::Fixed;
    else if (confidence == "calibrated")
      cfg.oracle.confidence_model = acsim::ConfidenceModel::Calibrated;
    else
      throw std::invalid_argument("--confidence must be fixed or calibrated");
    cfg.oracle.fixed_confidence = fixed_confidence;
    if (ramp_epochs > 0)
      cfg.oracle.ramp_epochs = ramp_epochs;
    cfg.test_views = views;
    cfg.seed = seed;
    cfg.workers = workers;
    cfg.noise_threshold = noise_threshold;
    cfg.validate();
    return cfg;
  }
};

void add_sim_flags(CLI::App* cmd, SimOptions& opt) {
  cmd->add_option("--videos", opt.videos, "Number of videos in the corpus");
  cmd->add_option("--frames-min", opt.frames_min, "Minimum frames per video");
  cmd->add_option("--frames-max", opt.frames_max, "Maximum frames per video");
  cmd->add_option("--frames", [&opt](const std::vector<std::string>& v) {
    opt.frames_min = opt.frames_max = std::stoi(v.back());
    return true;
  }, "Fixed frame count (sets both bounds)");
  cmd->add_option("--gt-frac-min", opt.gt_frac_min, "Minimum gt length fraction");
  cmd->add_option("--gt-frac-max", opt.gt_frac_max, "Maximum gt length fraction");
  cmd->add_option("--gt-frac", [&opt](const std::vector<std::string>& v) {
    opt.gt_frac_min = opt.gt_frac_max = std::stod(v.back());
    return true;
  }, "Fixed gt length fraction (sets both bounds)");
  cmd->add_option("--classes", opt.classes, "Number of action classes");
  cmd->add_option("--seed", opt.seed, "Master seed");
  cmd->add_option("--clip-length", opt.clip_length, "Frames per clip (n)");
  cmd->add_option("--epochs", opt.epochs, "Training epochs");
  cmd->add_option("--repeats", opt.repeats, "Clip draws per video per epoch");
  cmd->add_option("--acs", opt.acs, "Adaptive clip selection: on|off");
  cmd->add_option("--sampler", opt.sampler, "Baseline sampler: sparse|continuous");
  cmd->add_option("--stride", opt.stride, "Continuous sampler stride");
  cmd->add_option("--views", opt.views, "Test protocol views: 1|10");
  cmd->add_option("--negative-mode", opt.negative_mode,
                  "All-negative video handling: keep|ignore");
  cmd->add_option("--activation-threshold", opt.activation_threshold,
                  "Nonzero-score fraction required to activate ACS");
  cmd->add_option("--update-weight", opt.update_weight,
                  "Score update magnitude: confidence|selection-prob");
  cmd->add_option("--p-fg", opt.p_fg, "Oracle accuracy at full overlap");
  cmd->add_option("--p-bg", opt.p_bg, "Oracle accuracy at zero overlap");
  cmd->add_option("--confidence", opt.confidence,
                  "Oracle confidence model: fixed|calibrated");
  cmd->add_option("--fixed-confidence", opt.fixed_confidence,
                  "Confidence value for the fixed model");
  cmd->add_option("--ramp-epochs", opt.ramp_epochs,
                  "Ramp oracle accuracy over this many epochs (0 = off)");
  cmd->add_option("--workers", opt.workers, "Worker threads");
  cmd->add_option("--noise-threshold", opt.noise_threshold,
                  "Overlap below this counts as a noisy draw");
}

void write_manifest(const std::string& path, const std::string& command,
                    const OptionMap& config, std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
  nlohmann::ordered_json j;
  j["schema"] = "acsim-manifest-v1";
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["seed"] = seed;
  j["wall_clock_utc"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::system_clock::now().time_since_epoch())
                            .count();
  j["outputs"] = outputs;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : config)
    cfg[k] = v;
  j["config"] = cfg;
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
}

OptionMap load_manifest_config(const std::string& path, std::string* command) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot read manifest: " + path);
  nlohmann::json j;
  in >> j;
  if (command)
    *command = j.at("command").get<std::string>();
  OptionMap m;
  for (const auto& [k, v] : j.at("config").items())
    m[k] = v.get<std::string>();
  return m;
}

int run_corpus(SimOptions opt, const std::string& out_path,
               const std::string& from_manifest) {
  if (!from_manifest.empty())
    opt.apply(load_manifest_config(from_manifest, nullptr));
  const acsim::SimConfig cfg = opt.to_config();
  write_manifest(out_path + ".manifest.json", "corpus", opt.to_map(), opt.seed,
                 {out_path});
  const auto corpus = acsim::generate_corpus(cfg.corpus);
  acsim::save_corpus_file(out_path, corpus, cfg.corpus.num_classes);
  std::cout << "wrote " << corpus.size() << " videos to " << out_path << "\n";
  return 0;
}

int run_sim(SimOptions opt, const std::string& out_prefix,
            const std::string& from_manifest, const std::string& resume_path,
            const std::string& checkpoint_out, bool with_baseline,
            int stop_after) {
  if (!from_manifest.empty())
    opt.apply(load_manifest_config(from_manifest, nullptr));
  const acsim::SimConfig cfg = opt.to_config();
  const std::string csv_path = out_prefix + ".csv";
  const std::string json_path = out_prefix + ".json";
  write_manifest(out_prefix + ".manifest.json", "sim", opt.to_map(), opt.seed,
                 {csv_path, json_path});

  acsim::Simulation simulation(cfg);
  if (!resume_path.empty()) {
    std::ifstream in(resume_path);
    if (!in)
      throw std::runtime_error("cannot read checkpoint: " + resume_path);
    simulation.restore(acsim::SimCheckpoint::load(in));
  }
  const acsim::SimReport report =
      stop_after > 0 ? simulation.run_until(stop_after) : simulation.run();
  if (!checkpoint_out.empty()) {
    std::ofstream out(checkpoint_out);
    if (!out)
      throw std::runtime_error("cannot write checkpoint: " + checkpoint_out);
    simulation.checkpoint().save(out);
  }

  {
    std::ofstream out(csv_path);
    if (!out)
      throw std::runtime_error("cannot write " + csv_path);
    report.write_csv(out);
  }

  nlohmann::ordered_json j;
  j["schema"] = "acsim-sim-summary-v1";
  j["epochs"] = report.rows.size();
  j["noise_threshold"] = report.noise_threshold;
  j["final_mean_overlap"] = report.final_mean_overlap;
  j["noise_rate"] = report.final_noise_rate;
  j["final_top1"] = report.final_top1;
  const acsim::EvalResult eval =
      acsim::evaluate(cfg, simulation.corpus(), cfg.test_views);
  j["eval_views"] = cfg.test_views;
  j["eval_top1"] = eval.top1;
  j["eval_top5"] = eval.top5;
  if (cfg.acs_enabled && with_baseline) {
    // Paired uniform baseline: identical corpus and seeds, ACS off.
    acsim::SimConfig base = cfg;
    base.acs_enabled = false;
    const acsim::SimReport baseline = acsim::run(base);
    j["baseline_final_mean_overlap"] = baseline.final_mean_overlap;
    j["baseline_noise_rate"] = baseline.final_noise_rate;
    j["overlap_gain"] = baseline.final_mean_overlap > 0.0
                            ? report.final_mean_overlap /
                                  baseline.final_mean_overlap
                            : 0.0;
  }
  {
    std::ofstream out(json_path);
    if (!out)
      throw std::runtime_error("cannot write " + json_path);
    out << j.dump(2) << "\n";
  }
  std::cout << "final mean overlap " << report.final_mean_overlap
            << ", noise rate " << report.final_noise_rate << "\n";
  return 0;
}

int run_ablate(const SimOptions& base, const std::vector<std::string>& rows,
               const std::string& out_path) {
  std::vector<std::pair<std::string, acsim::SimConfig>> grid;
  for (const std::string& row : rows) {
    const auto colon = row.find(':');
    const std::string name = colon == std::string::npos ? row : row.substr(0, colon);
    SimOptions opt = base;
    if (colon != std::string::npos) {
      OptionMap overrides;
      std::istringstream items(row.substr(colon + 1));
      std::string item;
      while (std::getline(items, item, ';')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
          throw std::invalid_argument("ablate row override must be key=value: " + item);
        overrides[item.substr(0, eq)] = item.substr(eq + 1);
      }
      opt.apply(overrides);
    }
    grid.emplace_back(name, opt.to_config());
  }
  write_manifest(out_path + ".manifest.json", "ablate", base.to_map(), base.seed,
                 {out_path});
  const auto table = acsim::ablate(grid);
  std::ofstream out(out_path);
  if (!out)
    throw std::runtime_error("cannot write " + out_path);
  acsim::write_ablation_csv(out, table);
  std::cout << "wrote " << table.size() << " ablation rows to " << out_path << "\n";
  return 0;
}

int run_lr_dump(std::int64_t head, std::int64_t warmup, std::int64_t main_iters,
                double alpha, const std::string& out_path) {
  acsim::SchedulePlan plan;
  plan.head_only_iters = head;
  plan.warmup_iters = warmup;
  plan.main_iters = main_iters;
  plan.alpha = alpha;
  plan.validate();
  OptionMap cfg{{"head_only_iters", std::to_string(head)},
                {"warmup_iters", std::to_string(warmup)},
                {"main_iters", std::to_string(main_iters)},
                {"alpha", fmt(alpha)}};
  write_manifest(out_path + ".manifest.json", "lr-dump", cfg, 0, {out_path});
  std::ofstream out(out_path);
  if (!out)
    throw std::runtime_error("cannot write " + out_path);
  out << "# acsim-lr-trace v1\niteration,stage,lr\n";
  for (std::int64_t t = 0; t <= plan.total_iters(); ++t)
    out << t << ',' << acsim::to_string(acsim::stage_at(t, plan)) << ','
        << fmt(acsim::lr_at(t, plan)) << "\n";
  return 0;
}

int run_eval(SimOptions opt, const std::string& from_manifest) {
  if (!from_manifest.empty())
    opt.apply(load_manifest_config(from_manifest, nullptr));
  const acsim::SimConfig cfg = opt.to_config();
  const auto corpus = acsim::generate_corpus(cfg.corpus);
  const acsim::EvalResult res = acsim::evaluate(cfg, corpus, cfg.test_views);
  nlohmann::ordered_json j;
  j["schema"] = "acsim-eval-v1";
  j["views"] = cfg.test_views;
  j["top1"] = res.top1;
  j["top5"] = res.top5;
  std::cout << j.dump(2) << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive clip selection training-data simulator"};
  app.set_version_flag("--version", kToolVersion);
  app.set_config("--config", "", "Flat key=value config file; flags override");
  app.require_subcommand(1);

  SimOptions opt;
  std::string out_prefix = "acsim_run";
  std::string corpus_out = "corpus.txt";
  std::string ablate_out = "ablation.csv";
  std::string lr_out = "lr_trace.csv";
  std::string from_manifest;
  std::string resume_path;
  std::string checkpoint_out;
  bool no_baseline = false;
  std::vector<std::string> grid_rows;
  std::int64_t lr_head = 500, lr_warmup = 500, lr_main_iters = 9000;
  double lr_alpha = 1.5;

  CLI::App* corpus = app.add_subcommand("corpus", "Generate a synthetic corpus");
  add_sim_flags(corpus, opt);
  corpus->add_option("--out", corpus_out, "Corpus output path");
  corpus->add_option("--from-manifest", from_manifest, "Replay a manifest config");

  CLI::App* sim = app.add_subcommand("sim", "Run a training-loop simulation");
  add_sim_flags(sim, opt);
  sim->add_option("--out", out_prefix, "Output prefix (.csv/.json/.manifest.json)");
  sim->add_option("--from-manifest", from_manifest, "Replay a manifest config");
  sim->add_option("--resume", resume_path, "Resume from a checkpoint file");
  sim->add_option("--checkpoint-out", checkpoint_out, "Write final checkpoint here");
  sim->add_flag("--no-baseline", no_baseline,
                "Skip the paired uniform baseline run");
  int stop_after = 0;
  sim->add_option("--stop-after", stop_after,
                  "Run only the first K epochs of the plan (for checkpointing)");

  CLI::App* ablate_cmd = app.add_subcommand("ablate", "Run an ablation grid");
  add_sim_flags(ablate_cmd, opt);
  ablate_cmd->add_option("--out", ablate_out, "Ablation CSV output path");
  ablate_cmd
      ->add_option("--row", grid_rows,
                   "Grid row as name:key=value;key=value over the base config")
      ->required();

  CLI::App* lr = app.add_subcommand("lr-dump", "Dump the learning-rate trace");
  lr->add_option("--head-iters", lr_head, "Head-only stage length");
  lr->add_option("--warmup-iters", lr_warmup, "Warmup stage length");
  lr->add_option("--main-iters", lr_main_iters, "Main stage length (T_max)");
  lr->add_option("--alpha", lr_alpha, "Cosine exponent");
  lr->add_option("--out", lr_out, "Trace CSV output path");

  CLI::App* eval = app.add_subcommand("eval", "Evaluate the test protocol");
  add_sim_flags(eval, opt);
  eval->add_option("--from-manifest", from_manifest, "Replay a manifest config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (corpus->parsed())
      return run_corpus(opt, corpus_out, from_manifest);
    if (sim->parsed())
      return run_sim(opt, out_prefix, from_manifest, resume_path, checkpoint_out,
                     !no_baseline, stop_after);
    if (ablate_cmd->parsed())
      return run_ablate(opt, grid_rows, ablate_out);
    if (lr->parsed())
      return run_lr_dump(lr_head, lr_warmup, lr_main_iters, lr_alpha, lr_out);
    if (eval->parsed())
      return run_eval(opt, from_manifest);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  return 0;
}
