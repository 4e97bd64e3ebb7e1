#include "ssr/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "ssr/dataset.hpp"
#include "ssr/error.hpp"
#include "ssr/hypercube.hpp"
#include "ssr/metrics.hpp"
#include "ssr/rgbsynth.hpp"
#include "ssr/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ssr::cli {
namespace {

json load_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------- synth-scene

SceneSpec scene_spec_from_json(const json& j) {
  SceneSpec spec;
  try {
    spec.width = j.at("width").get<int>();
    spec.height = j.at("height").get<int>();
    const json& g = j.at("grid");
    spec.grid.start_nm = g.at("start_nm").get<double>();
    spec.grid.step_nm = g.at("step_nm").get<double>();
    spec.grid.count = g.at("count").get<int>();
    if (j.contains("n_rectangles")) spec.n_rectangles = j.at("n_rectangles").get<int>();
    if (j.contains("illumination_scale_px"))
      spec.illumination_scale_px = j.at("illumination_scale_px").get<int>();
    if (j.contains("noise_sigma")) spec.noise_sigma = j.at("noise_sigma").get<double>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("materials")) {
      for (const json& jm : j.at("materials")) {
        MaterialSpec m;
        m.offset = jm.at("offset").get<double>();
        for (const json& jb : jm.at("bumps")) {
          SignatureBump b;
          b.center_nm = jb.at("center_nm").get<double>();
          b.width_nm = jb.at("width_nm").get<double>();
          b.amplitude = jb.at("amplitude").get<double>();
          m.bumps.push_back(b);
        }
        spec.materials.push_back(m);
      }
    } else {
      int n_materials = 5;
      if (j.contains("n_materials")) n_materials = j.at("n_materials").get<int>();
      spec.materials = default_materials(n_materials, spec.grid);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scene config: ") + e.what());
  }
  return spec;
}

struct SynthSceneOpts {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void cmd_synth_scene(const SynthSceneOpts& o) {
  SceneSpec spec = scene_spec_from_json(load_json_file(o.config));
  if (o.seed_given) spec.seed = o.seed;
  spec.validate();
  Scene scene = generate_scene(spec);
  fs::create_directories(o.out);
  save_cube(scene.cube, fs::path(o.out) / "scene");
  save_labels(scene.labels, fs::path(o.out) / "labels");
  std::fprintf(stderr, "synth-scene: wrote %dx%d scene with %zu bands to %s\n",
               spec.width, spec.height, scene.cube.wavelengths.size(), o.out.c_str());
}

// ------------------------------------------------------------------- resample

struct ResampleOpts {
  std::string in, out;
  double start = 400.0, step = 10.0, half_window = 5.0;
  int count = 31;
};

void cmd_resample(const ResampleOpts& o) {
  SpectralCube cube = load_cube(o.in);
  WavelengthGrid grid{o.start, o.step, o.count};
  SpectralCube resampled = resample_bands(cube, grid.centers(), o.half_window);
  fs::path out(o.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_cube(resampled, out);
  std::fprintf(stderr, "resample: %zu bands -> %d bands, wrote %s\n",
               cube.wavelengths.size(), o.count, o.out.c_str());
}

// -------------------------------------------------------------- synthesize-rgb

struct SynthRgbOpts {
  std::string in, csf = "builtin", out;
};

void cmd_synthesize_rgb(const SynthRgbOpts& o) {
  SpectralCube cube = load_cube(o.in);
  CameraSensitivity csf =
      o.csf == "builtin" ? builtin_csf(cube.wavelengths) : load_csf(o.csf);
  RGBImage rgb = synthesize_rgb(cube, csf);
  fs::path out(o.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_rgb(rgb, out);
  std::fprintf(stderr, "synthesize-rgb: wrote %dx%d image to %s\n", rgb.width,
               rgb.height, o.out.c_str());
}

// -------------------------------------------------------------- split-patches

struct SplitPatchesOpts {
  std::string rgb, hsi, out;
  double fraction = 0.6;
  std::string axis = "columns";
  int size = 64;
  int n_train = 0, n_test = 0;
  std::uint64_t seed = 0;
};

void cmd_split_patches(const SplitPatchesOpts& o) {
  RGBImage rgb = load_rgb(o.rgb);
  SpectralCube hsi = load_cube(o.hsi);
  SplitAxis axis = axis_from_string(o.axis);
  int extent = axis == SplitAxis::columns ? rgb.width : rgb.height;
  SplitRegion region = geographic_split(extent, o.fraction, axis);
  PatchSet set = extract_patches(rgb, hsi, region, o.size, o.n_train, o.n_test, o.seed);
  set.source_rgb = o.rgb;
  set.source_hsi = o.hsi;
  int overlaps = audit_split_overlaps(set);
  if (overlaps != 0)
    throw ValidationError("split-patches: train/test overlap audit found " +
                          std::to_string(overlaps) + " colliding pairs");
  save_patchset(set, o.out);
  std::fprintf(stderr,
               "split-patches: cut at %s %d of %d; wrote %zu train + %zu test "
               "patches to %s\n",
               o.axis.c_str(), region.cut, extent, set.count(Split::train),
               set.count(Split::test), o.out.c_str());
}

// ---------------------------------------------------------------------- train

struct TrainOpts {
  std::string patches, out;
  std::string config;
  std::string resume;
  int epochs = 0;
  int batch = 0;
  double lambda = 0.0;
  double lr_start = 0.0, lr_end = 0.0;
  std::string aux, schedule, disc;
  int gen_depth = 0;
  double gen_mult = 0.0, disc_mult = 0.0, dropout = 0.0;
  bool norm = false;
  std::uint64_t seed = 0;
  int stop_after = 0;
};

std::vector<int> default_plan_for_depth(int depth) {
  static const int kBase[6] = {64, 128, 256, 512, 512, 512};
  std::vector<int> plan;
  for (int i = 0; i < depth; ++i) plan.push_back(i < 6 ? kBase[i] : 512);
  return plan;
}

void apply_training_json(TrainingConfig& cfg, const json& j) {
  try {
    if (j.contains("lambda_l1")) cfg.lambda_l1 = j.at("lambda_l1").get<double>();
    if (j.contains("epochs")) cfg.epochs = j.at("epochs").get<int>();
    if (j.contains("lr_start")) cfg.lr_start = j.at("lr_start").get<double>();
    if (j.contains("lr_end")) cfg.lr_end = j.at("lr_end").get<double>();
    if (j.contains("beta1")) cfg.beta1 = j.at("beta1").get<double>();
    if (j.contains("beta2")) cfg.beta2 = j.at("beta2").get<double>();
    if (j.contains("adam_eps")) cfg.adam_eps = j.at("adam_eps").get<double>();
    if (j.contains("batch_size")) cfg.batch_size = j.at("batch_size").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("aux")) cfg.aux = nn::aux_from_string(j.at("aux").get<std::string>());
    if (j.contains("schedule"))
      cfg.schedule = schedule_from_string(j.at("schedule").get<std::string>());
    if (j.contains("generator")) {
      const json& g = j.at("generator");
      if (g.contains("depth")) {
        cfg.gen.depth = g.at("depth").get<int>();
        cfg.gen.plan = default_plan_for_depth(cfg.gen.depth);
      }
      if (g.contains("plan")) cfg.gen.plan = g.at("plan").get<std::vector<int>>();
      if (g.contains("dropout")) cfg.gen.dropout = g.at("dropout").get<double>();
      if (g.contains("width_multiplier"))
        cfg.gen.width_multiplier = g.at("width_multiplier").get<double>();
      if (g.contains("norm")) cfg.gen.norm = g.at("norm").get<bool>();
    }
    if (j.contains("discriminator")) {
      const json& d = j.at("discriminator");
      if (d.contains("preset"))
        cfg.disc.preset = nn::preset_from_string(d.at("preset").get<std::string>());
      if (d.contains("width_multiplier"))
        cfg.disc.width_multiplier = d.at("width_multiplier").get<double>();
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("training config: ") + e.what());
  }
}

void save_history(const fs::path& path, const std::vector<LossRecord>& history) {
  json arr = json::array();
  for (const LossRecord& r : history) {
    arr.push_back({{"epoch", r.epoch},
                   {"step", r.step},
                   {"d_loss", r.d_loss},
                   {"g_adv", r.g_adv},
                   {"g_aux", r.g_aux},
                   {"g_total", r.g_total}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << arr.dump(2) << "\n";
}

// Prints one per-epoch summary line to stderr as records stream in.
class EpochLogger {
 public:
  void add(const LossRecord& r) {
    if (n_ > 0 && r.epoch != epoch_) flush();
    epoch_ = r.epoch;
    ++n_;
    d_ += r.d_loss;
    adv_ += r.g_adv;
    aux_ += r.g_aux;
  }
  void flush() {
    if (n_ == 0) return;
    std::fprintf(stderr, "train: epoch %d  d=%.4f  g_adv=%.4f  g_aux=%.5f\n",
                 epoch_, d_ / n_, adv_ / n_, aux_ / n_);
    n_ = 0;
    d_ = adv_ = aux_ = 0.0;
  }

 private:
  int epoch_ = 0;
  int n_ = 0;
  double d_ = 0.0, adv_ = 0.0, aux_ = 0.0;
};

void cmd_train(const TrainOpts& o, const CLI::App& cmd) {
  PatchSet patches = load_patchset(o.patches);
  auto given = [&cmd](const std::string& name) { return cmd.count(name) > 0; };

  std::unique_ptr<TrainState> state;
  if (!o.resume.empty()) {
    for (const char* flag : {"--config", "--batch", "--lambda", "--lr-start",
                             "--lr-end", "--aux", "--schedule", "--disc",
                             "--gen-depth", "--gen-mult", "--disc-mult",
                             "--dropout", "--norm", "--seed"}) {
      if (given(flag))
        throw ValidationError(
            std::string("train: --resume restores the full configuration from "
                        "the checkpoint; only --epochs and --stop-after may be "
                        "combined with it (got ") +
            flag + ")");
    }
    state = load_checkpoint(o.resume);
    if (given("--epochs")) state->config.epochs = o.epochs;
  } else {
    TrainingConfig cfg;
    if (!o.config.empty()) apply_training_json(cfg, load_json_file(o.config));
    if (given("--epochs")) cfg.epochs = o.epochs;
    if (given("--batch")) cfg.batch_size = o.batch;
    if (given("--lambda")) cfg.lambda_l1 = o.lambda;
    if (given("--lr-start")) cfg.lr_start = o.lr_start;
    if (given("--lr-end")) cfg.lr_end = o.lr_end;
    if (given("--aux")) cfg.aux = nn::aux_from_string(o.aux);
    if (given("--schedule")) cfg.schedule = schedule_from_string(o.schedule);
    if (given("--disc")) cfg.disc.preset = nn::preset_from_string(o.disc);
    if (given("--gen-depth")) {
      cfg.gen.depth = o.gen_depth;
      cfg.gen.plan = default_plan_for_depth(o.gen_depth);
    }
    if (given("--gen-mult")) cfg.gen.width_multiplier = o.gen_mult;
    if (given("--disc-mult")) cfg.disc.width_multiplier = o.disc_mult;
    if (given("--dropout")) cfg.gen.dropout = o.dropout;
    if (given("--norm")) cfg.gen.norm = true;
    if (given("--seed")) cfg.seed = o.seed;
    cfg.gen.seed = cfg.seed;
    cfg.disc.seed = cfg.seed;
    cfg.validate();
    state = init_train_state(cfg, patches.wavelengths);
  }

  int max_epochs = given("--stop-after") ? o.stop_after : -1;
  fs::path out(o.out);
  EpochLogger logger;
  train_epochs(*state, patches, out / "checkpoints",
               [&logger](const LossRecord& r) { logger.add(r); }, max_epochs);
  logger.flush();
  fs::create_directories(out);
  save_history(out / "history.json", state->history);
  std::fprintf(stderr, "train: completed %d of %d epochs; checkpoints under %s\n",
               state->completed_epochs, state->config.epochs,
               (out / "checkpoints").string().c_str());
}

// ---------------------------------------------------------------------- infer

struct InferOpts {
  std::string checkpoint, rgb, out;
  bool dropout = false;
};

void cmd_infer(const InferOpts& o) {
  std::unique_ptr<TrainState> state = load_checkpoint(o.checkpoint);
  RGBImage rgb = load_rgb(o.rgb);
  int multiple = 1 << state->config.gen.depth;
  auto [padded_rgb, crop] = pad_to_multiple(rgb, multiple);
  nn::Tensor<float> padded = tensor_from_rgb(padded_rgb);
  state->gen->set_mode(o.dropout ? nn::Mode::training : nn::Mode::inference);
  nn::Tensor<float> out = state->gen->forward(padded);
  out = crop_tensor(out, crop);
  SpectralCube cube = cube_from_tensor(out, state->wavelengths);
  fs::path path(o.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_cube(cube, path);
  std::fprintf(stderr, "infer: wrote %dx%dx%zu cube to %s\n", cube.width,
               cube.height, cube.wavelengths.size(), o.out.c_str());
}

// ------------------------------------------------------------------- evaluate

struct EvaluateOpts {
  std::string checkpoint, patches, out;
};

void cmd_evaluate(const EvaluateOpts& o) {
  std::unique_ptr<TrainState> state = load_checkpoint(o.checkpoint);
  PatchSet patches = load_patchset(o.patches);
  EvalReport report = evaluate(*state->gen, patches);
  fs::path path(o.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_report(report, path);
  if (report.psnr_unit)
    std::fprintf(stderr, "evaluate: rmse_8bit=%.4f psnr=%.4f dB over %zu patches\n",
                 report.rmse_8bit, *report.psnr_unit, report.test_patches);
  else
    std::fprintf(stderr, "evaluate: rmse_8bit=%.4f psnr=inf over %zu patches\n",
                 report.rmse_8bit, report.test_patches);
}

// ------------------------------------------------------------------ signature

struct SignatureOpts {
  std::string truth, pred, points, out;
  int samples = 8;
  std::string scale = "unit";
};

std::vector<std::pair<int, int>> parse_points(const std::string& text) {
  std::vector<std::pair<int, int>> points;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t semi = text.find(';', pos);
    std::string token = text.substr(pos, semi == std::string::npos ? std::string::npos
                                                                   : semi - pos);
    if (!token.empty()) {
      std::size_t comma = token.find(',');
      if (comma == std::string::npos)
        throw ValidationError("signature: point '" + token +
                              "' is not of the form row,col");
      int row = 0, col = 0;
      const char* rb = token.data();
      const char* re = token.data() + comma;
      const char* cb = token.data() + comma + 1;
      const char* ce = token.data() + token.size();
      auto r1 = std::from_chars(rb, re, row);
      auto r2 = std::from_chars(cb, ce, col);
      if (r1.ec != std::errc() || r1.ptr != re || r2.ec != std::errc() || r2.ptr != ce)
        throw ValidationError("signature: point '" + token +
                              "' is not of the form row,col");
      points.emplace_back(row, col);
    }
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  if (points.empty())
    throw ValidationError("signature: no sample points given (use --points \"row,col;row,col\")");
  return points;
}

void cmd_signature(const SignatureOpts& o) {
  SpectralCube truth = load_cube(o.truth);
  SpectralCube pred = load_cube(o.pred);
  CurveScale scale;
  if (o.scale == "unit")
    scale = CurveScale::unit;
  else if (o.scale == "eight_bit")
    scale = CurveScale::eight_bit;
  else
    throw ValidationError("signature: unknown scale '" + o.scale +
                          "' (expected unit or eight_bit)");
  std::vector<Curve> curves;
  std::vector<std::string> labels;
  for (auto [row, col] : parse_points(o.points)) {
    Signature sig_truth = sample_signature(truth, row, col, SignatureSource::ground_truth);
    Signature sig_pred = sample_signature(pred, row, col, SignatureSource::predicted);
    curves.push_back(interpolate_bspline(sig_truth, o.samples, scale));
    labels.push_back("truth (" + std::to_string(row) + "," + std::to_string(col) + ")");
    curves.push_back(interpolate_bspline(sig_pred, o.samples, scale));
    labels.push_back("predicted (" + std::to_string(row) + "," + std::to_string(col) + ")");
  }
  RenderedCurves rendered = render_curves(curves, labels);
  fs::create_directories(o.out);
  {
    std::ofstream csv(fs::path(o.out) / "curves.csv");
    if (!csv) throw IoError("cannot write " + (fs::path(o.out) / "curves.csv").string());
    csv << rendered.csv;
  }
  {
    std::ofstream svg(fs::path(o.out) / "curves.svg");
    if (!svg) throw IoError("cannot write " + (fs::path(o.out) / "curves.svg").string());
    svg << rendered.svg;
  }
  std::fprintf(stderr, "signature: wrote %zu curves to %s\n", curves.size(),
               o.out.c_str());
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"aerial RGB-to-hyperspectral reconstruction pipeline"};
  app.require_subcommand(1);

  auto synth = std::make_shared<SynthSceneOpts>();
  CLI::App* c_synth = app.add_subcommand(
      "synth-scene", "generate a synthetic hyperspectral scene with material labels");
  c_synth->add_option("--config", synth->config, "scene description (JSON)")->required();
  c_synth->add_option("--out", synth->out, "output directory")->required();
  CLI::Option* synth_seed = c_synth->add_option("--seed", synth->seed, "override the scene seed");
  c_synth->callback([synth, synth_seed] {
    synth->seed_given = synth_seed->count() > 0;
    cmd_synth_scene(*synth);
  });

  auto rs = std::make_shared<ResampleOpts>();
  CLI::App* c_rs = app.add_subcommand(
      "resample", "reduce a cube to a coarser wavelength grid by window averaging");
  c_rs->add_option("--in", rs->in, "input cube (basename of .json/.raw pair)")->required();
  c_rs->add_option("--out", rs->out, "output cube basename")->required();
  c_rs->add_option("--start", rs->start, "first target center (nm)");
  c_rs->add_option("--step", rs->step, "target spacing (nm)");
  c_rs->add_option("--count", rs->count, "number of target bands");
  c_rs->add_option("--half-window", rs->half_window, "averaging half-window (nm)");
  c_rs->callback([rs] { cmd_resample(*rs); });

  auto sr = std::make_shared<SynthRgbOpts>();
  CLI::App* c_sr = app.add_subcommand(
      "synthesize-rgb", "project a normalized cube through camera sensitivity curves");
  c_sr->add_option("--in", sr->in, "input cube basename")->required();
  c_sr->add_option("--csf", sr->csf, "'builtin' or a sensitivity CSV path");
  c_sr->add_option("--out", sr->out, "output image basename")->required();
  c_sr->callback([sr] { cmd_synthesize_rgb(*sr); });

  auto sp = std::make_shared<SplitPatchesOpts>();
  CLI::App* c_sp = app.add_subcommand(
      "split-patches", "split a scene geographically and sample aligned patch pairs");
  c_sp->add_option("--rgb", sp->rgb, "input image basename")->required();
  c_sp->add_option("--hsi", sp->hsi, "input cube basename")->required();
  c_sp->add_option("--out", sp->out, "output patch directory")->required();
  c_sp->add_option("--fraction", sp->fraction, "train fraction of the split axis");
  c_sp->add_option("--axis", sp->axis, "split axis: columns or rows");
  c_sp->add_option("--size", sp->size, "square patch size (px)");
  c_sp->add_option("--n-train", sp->n_train, "number of training patches")->required();
  c_sp->add_option("--n-test", sp->n_test, "number of test patches")->required();
  c_sp->add_option("--seed", sp->seed, "patch sampling seed");
  c_sp->callback([sp] { cmd_split_patches(*sp); });

  auto tr = std::make_shared<TrainOpts>();
  CLI::App* c_tr = app.add_subcommand("train", "train the reconstruction network");
  c_tr->add_option("--patches", tr->patches, "patch directory")->required();
  c_tr->add_option("--out", tr->out, "output directory (checkpoints + history)")->required();
  c_tr->add_option("--config", tr->config, "training config (JSON)");
  c_tr->add_option("--resume", tr->resume, "checkpoint directory to resume from");
  c_tr->add_option("--epochs", tr->epochs, "total epochs");
  c_tr->add_option("--batch", tr->batch, "batch size");
  c_tr->add_option("--lambda", tr->lambda, "reconstruction loss weight");
  c_tr->add_option("--lr-start", tr->lr_start, "initial learning rate");
  c_tr->add_option("--lr-end", tr->lr_end, "final learning rate");
  c_tr->add_option("--aux", tr->aux, "reconstruction loss: l1 or l2");
  c_tr->add_option("--schedule", tr->schedule, "lr schedule: constant_then_linear or step");
  c_tr->add_option("--disc", tr->disc, "discriminator preset: rf70, rf34, rf16, rf1");
  c_tr->add_option("--gen-depth", tr->gen_depth, "generator encoder depth");
  c_tr->add_option("--gen-mult", tr->gen_mult, "generator width multiplier");
  c_tr->add_option("--disc-mult", tr->disc_mult, "discriminator width multiplier");
  c_tr->add_option("--dropout", tr->dropout, "generator dropout rate");
  c_tr->add_flag("--norm", tr->norm, "enable per-channel feature normalization");
  c_tr->add_option("--seed", tr->seed, "training seed");
  c_tr->add_option("--stop-after", tr->stop_after,
                   "train at most this many epochs in this invocation");
  c_tr->callback([tr, c_tr] { cmd_train(*tr, *c_tr); });

  auto inf = std::make_shared<InferOpts>();
  CLI::App* c_inf = app.add_subcommand(
      "infer", "reconstruct a hyperspectral cube from an RGB image");
  c_inf->add_option("--checkpoint", inf->checkpoint, "checkpoint directory")->required();
  c_inf->add_option("--rgb", inf->rgb, "input image basename")->required();
  c_inf->add_option("--out", inf->out, "output cube basename")->required();
  c_inf->add_flag("--dropout", inf->dropout, "keep dropout active during inference");
  c_inf->callback([inf] { cmd_infer(*inf); });

  auto ev = std::make_shared<EvaluateOpts>();
  CLI::App* c_ev = app.add_subcommand(
      "evaluate", "score a checkpoint against the test patches");
  c_ev->add_option("--checkpoint", ev->checkpoint, "checkpoint directory")->required();
  c_ev->add_option("--patches", ev->patches, "patch directory")->required();
  c_ev->add_option("--out", ev->out, "report path (JSON)")->required();
  c_ev->callback([ev] { cmd_evaluate(*ev); });

  auto sg = std::make_shared<SignatureOpts>();
  CLI::App* c_sg = app.add_subcommand(
      "signature", "plot smoothed per-pixel spectra from truth and prediction");
  c_sg->add_option("--truth", sg->truth, "ground-truth cube basename")->required();
  c_sg->add_option("--pred", sg->pred, "predicted cube basename")->required();
  c_sg->add_option("--points", sg->points, "sample points \"row,col;row,col\"")->required();
  c_sg->add_option("--out", sg->out, "output directory (curves.csv + curves.svg)")->required();
  c_sg->add_option("--samples-per-interval", sg->samples, "curve samples per band interval");
  c_sg->add_option("--scale", sg->scale, "value scale: unit or eight_bit");
  c_sg->callback([sg] { cmd_signature(*sg); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.push_back("ssrtool");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const std::string& a : full) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace ssr::cli
