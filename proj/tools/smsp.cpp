// smsp: command-line front end for spline-partition fitting and the
// benchmark experiments.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "smsp/cutgen.hpp"
#include "smsp/data.hpp"
#include "smsp/errors.hpp"
#include "smsp/eval.hpp"
#include "smsp/inference.hpp"
#include "smsp/shape.hpp"

#ifndef SMSP_GIT_DESCRIBE
#define SMSP_GIT_DESCRIBE "unknown"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kIo = 3, kNumerical = 4 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string sha256_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw smsp::IoError("cannot read " + path.string() + " for digest");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (f) {
    f.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(f.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw smsp::IoError("cannot write " + path.string());
  f << text;
  if (!f) throw smsp::IoError("write failed for " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw smsp::IoError("cannot open " + path.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw smsp::IoError("invalid JSON in " + path.string() + ": " + e.what(), e.byte);
  }
}

double parse_budget(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("bad budget: " + s);
  }
  if (used != s.size() || !(v >= 0)) throw UsageError("bad budget: " + s);
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_budget(item));
  return out;
}

json budget_json(double b) { return std::isinf(b) ? json("inf") : json(b); }

/// Options shared by every command that fits a model.
struct FitOptions {
  int particles{100};
  std::string budget{"inf"};
  double ess{0.5};
  int workers{0};
  std::uint64_t seed{0};
  std::string alpha{"auto"};
  std::string order{"mixed"};
  int max_rejections{10000};
  std::string abcd;
  int cuts{0};

  void add_to(CLI::App* app) {
    app->add_option("--particles", particles, "number of SMC particles")->check(CLI::PositiveNumber);
    app->add_option("--budget", budget, "process budget tau, or inf");
    app->add_option("--ess", ess, "resampling threshold as a fraction of M")->check(CLI::Range(1e-9, 1.0));
    app->add_option("--workers", workers, "worker threads (default: SMSP_WORKERS or 1)");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--alpha", alpha, "auto or comma-separated per-label values");
    app->add_option("--order", order, "mixed, 1, 2 or 3")->check(CLI::IsMember({"mixed", "1", "2", "3"}));
    app->add_option("--max-rejections", max_rejections, "proposal cap per cut")->check(CLI::PositiveNumber);
    app->add_option("--abcd", abcd, "fixed control box a,b,c,d");
    app->add_option("--cuts", cuts, "stop each particle after this many cuts (0 = no cap)")->check(CLI::NonNegativeNumber);
  }

  int resolved_workers() const {
    if (workers > 0) return workers;
    if (const char* env = std::getenv("SMSP_WORKERS")) {
      const int w = std::atoi(env);
      if (w > 0) return w;
    }
    return 1;
  }

  smsp::CutGenConfig cut_config() const {
    smsp::CutGenConfig cfg = order == "mixed" ? smsp::CutGenConfig{} : smsp::CutGenConfig::fixed_order(std::stoi(order));
    cfg.max_rejections = max_rejections;
    if (!abcd.empty()) {
      const auto v = parse_list(abcd);
      if (v.size() != 4) throw UsageError("--abcd needs four values");
      cfg.box = smsp::ControlBox{v[0], v[1], v[2], v[3]};
    }
    cfg.validate();
    return cfg;
  }

  smsp::SMCConfig smc_config() const {
    smsp::SMCConfig cfg;
    cfg.n_particles = particles;
    cfg.budget = parse_budget(budget);
    cfg.ess_threshold = ess;
    cfg.n_workers = resolved_workers();
    cfg.seed = seed;
    if (cuts > 0) cfg.max_cuts = cuts;
    return cfg;
  }

  Eigen::VectorXd alpha_for(const smsp::Dataset& data) const {
    if (alpha == "auto") return smsp::default_alpha(data);
    const auto v = parse_list(alpha);
    if (static_cast<int>(v.size()) != data.num_labels) throw UsageError("--alpha needs one value per label");
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    if ((a.array() <= 0).any()) throw UsageError("--alpha entries must be positive");
    return a;
  }

  json snapshot() const {
    return {{"particles", particles}, {"budget", budget},   {"ess", ess},
            {"workers", resolved_workers()}, {"seed", seed}, {"alpha", alpha},
            {"order", order},         {"max_rejections", max_rejections},
            {"abcd", abcd},           {"cuts", cuts}};
  }
};

struct ImageOptions {
  double downscale{1.0};
  int threshold{128};
  bool invert{false};

  void add_to(CLI::App* app) {
    app->add_option("--downscale", downscale, "nearest-neighbor scale factor for PGM input")->check(CLI::Range(1e-6, 1.0));
    app->add_option("--threshold", threshold, "binarization threshold on 0..255")->check(CLI::Range(0, 256));
    app->add_flag("--invert", invert, "treat dark pixels as foreground");
  }
};

bool is_pgm(const fs::path& p) {
  auto ext = p.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".pgm";
}

struct Input {
  smsp::Dataset data;
  std::optional<smsp::ImageGrid> grid;
};

Input load_input(const fs::path& path, const ImageOptions& img) {
  Input in;
  if (is_pgm(path)) {
    auto ingested = smsp::ingest_image(path, img.downscale, img.threshold, img.invert);
    in.data = std::move(ingested.points);
    in.grid = std::move(ingested.grid);
  } else {
    in.data = smsp::read_points_csv(path);
  }
  in.data.validate();
  return in;
}

/// Collects outputs and writes the run manifest.
class Manifest {
 public:
  Manifest(std::vector<std::string> argv, std::string command)
      : argv_(std::move(argv)), command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

  void output(const fs::path& p) { outputs_.push_back(p); }
  void config(json c) { config_ = std::move(c); }
  void seed(std::uint64_t s) { seed_ = s; }

  void write(const fs::path& path) const {
    json outs = json::object();
    for (const auto& p : outputs_) outs[p.string()] = sha256_file(p);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
    write_json(path, {{"command", command_},
                      {"command_line", argv_},
                      {"seed", seed_},
                      {"config", config_},
                      {"git_describe", SMSP_GIT_DESCRIBE},
                      {"wall_seconds", dt.count()},
                      {"outputs", outs}});
  }

 private:
  std::vector<std::string> argv_;
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  std::vector<fs::path> outputs_;
  json config_ = json::object();
  std::uint64_t seed_{0};
};

fs::path manifest_path(const std::string& flag, const fs::path& first_output) {
  if (!flag.empty()) return flag;
  return fs::path(first_output.string() + ".manifest.json");
}

smsp::ImageGrid grid_from_labels(const smsp::ImageGrid& like, const std::vector<int>& labels) {
  smsp::ImageGrid g = like;
  for (Eigen::Index i = 0; i < g.labels.size(); ++i) g.labels.data()[i] = labels[static_cast<std::size_t>(i)];
  return g;
}

json report_json(const smsp::MetricReport& r) {
  const auto num = [](double v) { return std::isinf(v) ? json(v > 0 ? "Inf" : "-Inf") : json(v); };
  return {{"mse", r.mse}, {"psnr", num(r.psnr)}, {"jsc", r.jsc}, {"ssim", r.ssim}, {"pct_correct", r.pct_correct}};
}

int run(const std::vector<std::string>& args);

int run_replay(const fs::path& manifest_file) {
  const json m = read_json(manifest_file);
  const auto argv = m.at("command_line").get<std::vector<std::string>>();
  if (argv.size() < 2 || argv[1] == "replay") throw UsageError("manifest has no replayable command");
  const int rc = run(argv);
  if (rc != kOk) return rc;
  bool same = true;
  for (const auto& [path, digest] : m.at("outputs").items()) {
    const std::string now = sha256_file(path);
    const bool ok = now == digest.get<std::string>();
    std::cout << (ok ? "match    " : "MISMATCH ") << path << "\n";
    same = same && ok;
  }
  return same ? kOk : kNumerical;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Spline-partition shape modeling: fitting, prediction, shape extraction and experiments"};
  app.require_subcommand(1);
  std::string manifest_flag;
  app.add_option("--manifest", manifest_flag, "manifest path (default: <first output>.manifest.json)");

  // simulate-yinyang
  auto* sim = app.add_subcommand("simulate-yinyang", "sample the yin-yang dataset and split it");
  int sim_n = 10000;
  std::uint64_t sim_seed = 0;
  double sim_frac = 0.6;
  std::string sim_train = "yinyang_train.csv", sim_test = "yinyang_test.csv";
  sim->add_option("--n", sim_n, "raw draws on [-1,1]^2")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--train-frac", sim_frac, "training fraction")->check(CLI::Range(1e-9, 1.0 - 1e-9));
  sim->add_option("--train", sim_train, "training CSV path");
  sim->add_option("--test", sim_test, "test CSV path");

  // fit
  auto* fit = app.add_subcommand("fit", "fit a weighted particle model");
  FitOptions fit_opts;
  ImageOptions fit_img;
  std::string fit_input, fit_out = "model.json";
  fit->add_option("--input", fit_input, "point CSV or PGM image")->required();
  fit->add_option("--out", fit_out, "model JSON path");
  fit_opts.add_to(fit);
  fit_img.add_to(fit);

  // predict
  auto* pred = app.add_subcommand("predict", "predict labels with a fitted model");
  std::string pred_model, pred_input, pred_out, pred_report, pred_rule = "empirical";
  ImageOptions pred_img;
  pred->add_option("--model", pred_model, "model JSON")->required();
  pred->add_option("--input", pred_input, "point CSV or PGM image")->required();
  pred->add_option("--out", pred_out, "prediction CSV or PGM")->required();
  pred->add_option("--report", pred_report, "metrics JSON path");
  pred->add_option("--rule", pred_rule, "leaf rule")->check(CLI::IsMember({"empirical", "dirichlet"}));
  pred_img.add_to(pred);

  // metrics
  auto* met = app.add_subcommand("metrics", "compare predicted and ground-truth masks");
  std::vector<std::string> met_pred, met_truth;
  std::string met_out = "metrics.json";
  ImageOptions met_img;
  met->add_option("--pred", met_pred, "predicted PGM(s)")->required();
  met->add_option("--truth", met_truth, "ground-truth PGM(s), same order")->required();
  met->add_option("--out", met_out, "report JSON");
  met_img.add_to(met);

  // shape
  auto* shp = app.add_subcommand("shape", "extract boundaries and perimeters over a budget sweep");
  FitOptions shp_opts;
  ImageOptions shp_img;
  std::string shp_input, shp_budgets = "10,50,100,200", shp_prefix = "boundary", shp_perim = "perimeter.json";
  int shp_knn = 10, shp_ppc = 100;
  double shp_max_dist = 0;
  shp->add_option("--input", shp_input, "point CSV or PGM image")->required();
  shp->add_option("--budgets", shp_budgets, "comma-separated budgets");
  shp->add_option("--boundary-prefix", shp_prefix, "boundary CSVs are written as <prefix>_<budget>.csv");
  shp->add_option("--perimeter-out", shp_perim, "perimeter report JSON");
  shp->add_option("--knn", shp_knn, "neighbors per side")->check(CLI::PositiveNumber);
  shp->add_option("--max-dist", shp_max_dist, "neighbor distance cap (default: pixel diagonal)");
  shp->add_option("--points-per-cut", shp_ppc, "samples per cut curve")->check(CLI::Range(2, 1000000));
  shp_opts.add_to(shp);
  shp_img.add_to(shp);

  // invariance
  auto* inv = app.add_subcommand("invariance", "uniformity of points sampled from random cuts on the unit square");
  int inv_reps = 100, inv_curves = 5000, inv_grid = 10, inv_workers = 0, inv_boundary = 64;
  std::uint64_t inv_seed = 0;
  std::string inv_arm = "cuts", inv_out = "invariance.json", inv_order = "mixed";
  inv->add_option("--replicates", inv_reps, "replicates")->check(CLI::PositiveNumber);
  inv->add_option("--curves", inv_curves, "curves per replicate")->check(CLI::PositiveNumber);
  inv->add_option("--grid", inv_grid, "chi-square grid size g (g x g cells)")->check(CLI::PositiveNumber);
  inv->add_option("--seed", inv_seed, "random seed");
  inv->add_option("--arm", inv_arm, "cuts, uniform or quadrant")->check(CLI::IsMember({"cuts", "uniform", "quadrant"}));
  inv->add_option("--order", inv_order, "mixed, 1, 2 or 3")->check(CLI::IsMember({"mixed", "1", "2", "3"}));
  inv->add_option("--boundary-samples", inv_boundary, "square boundary samples per side")->check(CLI::PositiveNumber);
  inv->add_option("--workers", inv_workers, "worker threads");
  inv->add_option("--out", inv_out, "result JSON");

  // timing
  auto* tim = app.add_subcommand("timing", "wall time per (particles, workers) cell");
  std::string tim_particles = "100,200", tim_workers = "1", tim_input, tim_out = "timing.csv";
  int tim_rounds = 1, tim_n = 10000;
  std::uint64_t tim_seed = 0;
  tim->add_option("--particles", tim_particles, "comma-separated particle counts");
  tim->add_option("--workers", tim_workers, "comma-separated worker counts");
  tim->add_option("--rounds", tim_rounds, "SMC rounds per measurement")->check(CLI::PositiveNumber);
  tim->add_option("--input", tim_input, "point CSV (default: simulated yin-yang)");
  tim->add_option("--n", tim_n, "raw yin-yang draws when no input is given")->check(CLI::PositiveNumber);
  tim->add_option("--seed", tim_seed, "random seed");
  tim->add_option("--out", tim_out, "CSV path");

  // replay
  auto* rep = app.add_subcommand("replay", "re-run a manifest and compare output digests");
  std::string rep_manifest;
  rep->add_option("manifest", rep_manifest, "manifest JSON")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  Manifest manifest(args, app.get_subcommands().front()->get_name());

  try {
    if (*rep) return run_replay(rep_manifest);

    if (*sim) {
      const smsp::Dataset all = smsp::make_yinyang(sim_n, sim_seed);
      const auto [train, test] = smsp::split(all, sim_frac, smsp::derive_seed(sim_seed, 1));
      smsp::write_points_csv(sim_train, train);
      smsp::write_points_csv(sim_test, test);
      std::cout << json{{"retained", all.size()}, {"train", train.size()}, {"test", test.size()}}.dump() << "\n";
      manifest.seed(sim_seed);
      manifest.config({{"n", sim_n}, {"train_frac", sim_frac}});
      manifest.output(sim_train);
      manifest.output(sim_test);
      manifest.write(manifest_path(manifest_flag, sim_train));
      return kOk;
    }

    if (*fit) {
      const Input in = load_input(fit_input, fit_img);
      const auto particles = smsp::smc_fit(in.data, fit_opts.smc_config(), fit_opts.cut_config(), fit_opts.alpha_for(in.data));
      write_json(fit_out, smsp::model_to_json(particles));
      const auto& best = particles.particles[particles.best()];
      std::cout << json{{"particles", particles.particles.size()},
                        {"rounds", particles.rounds},
                        {"resamples", particles.resamples},
                        {"ess", particles.ess()},
                        {"best_particle", particles.best()},
                        {"best_cuts", best.state.cuts.size()},
                        {"best_leaves", best.state.leaves.size()},
                        {"train_accuracy", smsp::accuracy(particles, in.data)}}
                       .dump()
                << "\n";
      manifest.seed(fit_opts.seed);
      json cfg = fit_opts.snapshot();
      cfg["input"] = fit_input;
      manifest.config(cfg);
      manifest.output(fit_out);
      manifest.write(manifest_path(manifest_flag, fit_out));
      return kOk;
    }

    if (*pred) {
      const auto particles = smsp::model_from_json(read_json(pred_model));
      const Input in = load_input(pred_input, pred_img);
      const auto rule = pred_rule == "dirichlet" ? smsp::PredictionRule::kDirichlet : smsp::PredictionRule::kEmpirical;
      const auto labels = smsp::predict_labels(particles, in.data.points, rule);
      json report;
      if (in.grid) {
        const smsp::ImageGrid predicted = grid_from_labels(*in.grid, labels);
        smsp::write_pgm(pred_out, smsp::render(predicted));
        report = report_json(smsp::metrics(predicted, *in.grid));
      } else {
        smsp::Dataset out = in.data;
        out.labels = labels;
        smsp::write_points_csv(pred_out, out);
        Eigen::Index hits = 0;
        for (Eigen::Index i = 0; i < in.data.size(); ++i) hits += labels[static_cast<std::size_t>(i)] == in.data.label(i);
        report = {{"pct_correct", in.data.empty() ? 0.0 : 100.0 * hits / in.data.size()}};
      }
      std::cout << report.dump() << "\n";
      manifest.output(pred_out);
      if (!pred_report.empty()) {
        write_json(pred_report, report);
        manifest.output(pred_report);
      }
      manifest.config({{"model", pred_model}, {"input", pred_input}, {"rule", pred_rule}});
      manifest.write(manifest_path(manifest_flag, pred_out));
      return kOk;
    }

    if (*met) {
      if (met_pred.size() != met_truth.size()) throw UsageError("--pred and --truth need the same number of files");
      json per_image = json::array();
      std::vector<smsp::MetricReport> reports;
      for (std::size_t i = 0; i < met_pred.size(); ++i) {
        const auto p = smsp::binarize(smsp::read_pgm(met_pred[i]), met_img.threshold, met_img.invert);
        const auto t = smsp::binarize(smsp::read_pgm(met_truth[i]), met_img.threshold, met_img.invert);
        reports.push_back(smsp::metrics(p, t));
        json r = report_json(reports.back());
        r["pred"] = met_pred[i];
        r["truth"] = met_truth[i];
        per_image.push_back(r);
      }
      const json doc = {{"mean", report_json(smsp::mean_report(reports))}, {"images", per_image}};
      write_json(met_out, doc);
      std::cout << doc["mean"].dump() << "\n";
      manifest.output(met_out);
      manifest.write(manifest_path(manifest_flag, met_out));
      return kOk;
    }

    if (*shp) {
      const Input in = load_input(shp_input, shp_img);
      const smsp::CutGenConfig cut_cfg = shp_opts.cut_config();
      const Eigen::VectorXd alpha = shp_opts.alpha_for(in.data);
      smsp::ShapeOptions sopts;
      sopts.knn = shp_knn;
      sopts.points_per_cut = shp_ppc;
      sopts.max_dist = shp_max_dist > 0 ? shp_max_dist : (in.grid ? in.grid->pixel_diagonal() : 0.0);
      if (!(sopts.max_dist > 0)) throw UsageError("--max-dist is required for CSV input");
      json rows = json::array();
      for (double tau : parse_list(shp_budgets)) {
        smsp::SMCConfig cfg = shp_opts.smc_config();
        cfg.budget = tau;
        const auto particles = smsp::smc_fit(in.data, cfg, cut_cfg, alpha);
        const auto& best = particles.particles[particles.best()].state;
        sopts.budget = tau;
        const smsp::ShapeResult shape = smsp::extract_shape(best, in.data, sopts);
        const smsp::PerimeterReport p = smsp::perimeter(shape);

        std::ostringstream name;
        name << shp_prefix << '_' << tau << ".csv";
        std::ostringstream csv;
        csv << "segment_id,point_index,x,y\n" << std::setprecision(17);
        for (std::size_t s = 0; s < shape.segments.size(); ++s) {
          const auto& line = shape.segments[s].polyline;
          for (std::size_t k = 0; k < line.size(); ++k) csv << s << ',' << k << ',' << line[k].x() << ',' << line[k].y() << '\n';
        }
        write_text(name.str(), csv.str());
        manifest.output(name.str());
        rows.push_back({{"budget", budget_json(tau)},
                        {"raw_perimeter", p.raw},
                        {"normalized_perimeter", std::isnan(p.normalized) ? json(nullptr) : json(p.normalized)},
                        {"segments", shape.segments.size()},
                        {"cuts", best.cuts.size()},
                        {"boundary_csv", name.str()}});
      }
      write_json(shp_perim, {{"budgets", rows}});
      std::cout << rows.dump() << "\n";
      manifest.seed(shp_opts.seed);
      json cfg = shp_opts.snapshot();
      cfg["budgets"] = shp_budgets;
      cfg["knn"] = shp_knn;
      cfg["max_dist"] = sopts.max_dist;
      manifest.config(cfg);
      manifest.output(shp_perim);
      manifest.write(manifest_path(manifest_flag, shp_perim));
      return kOk;
    }

    if (*inv) {
      smsp::UniformityConfig cfg;
      cfg.n_curves = inv_curves;
      cfg.n_replicates = inv_reps;
      cfg.grid = inv_grid;
      cfg.seed = inv_seed;
      cfg.boundary_samples = inv_boundary;
      cfg.arm = inv_arm == "uniform" ? smsp::UniformityArm::kUniform
                : inv_arm == "quadrant" ? smsp::UniformityArm::kQuadrant
                                        : smsp::UniformityArm::kCuts;
      cfg.cut_cfg = inv_order == "mixed" ? smsp::CutGenConfig{} : smsp::CutGenConfig::fixed_order(std::stoi(inv_order));
      FitOptions w;
      w.workers = inv_workers;
      cfg.n_workers = w.resolved_workers();
      const auto r = smsp::uniformity_experiment(cfg);
      const json doc = {{"arm", inv_arm},       {"replicates", inv_reps},
                        {"curves", inv_curves}, {"grid", inv_grid},
                        {"fraction_p_above_0.05", r.fraction_above},
                        {"p_values", r.p_values},
                        {"points_kept", r.points_kept}};
      write_json(inv_out, doc);
      std::cout << json{{"fraction_p_above_0.05", r.fraction_above}}.dump() << "\n";
      manifest.seed(inv_seed);
      manifest.config({{"arm", inv_arm}, {"replicates", inv_reps}, {"curves", inv_curves}, {"grid", inv_grid}, {"order", inv_order}});
      manifest.output(inv_out);
      manifest.write(manifest_path(manifest_flag, inv_out));
      return kOk;
    }

    if (*tim) {
      const smsp::Dataset data = tim_input.empty() ? smsp::make_yinyang(tim_n, tim_seed) : smsp::read_points_csv(tim_input);
      std::vector<int> ms, ws;
      for (double v : parse_list(tim_particles)) ms.push_back(static_cast<int>(v));
      for (double v : parse_list(tim_workers)) ws.push_back(static_cast<int>(v));
      for (int v : ms) if (v < 1) throw UsageError("particle counts must be positive");
      for (int v : ws) if (v < 1) throw UsageError("worker counts must be positive");
      const std::string csv = smsp::timing_csv(smsp::timing_report(ms, ws, data, tim_rounds, tim_seed));
      write_text(tim_out, csv);
      std::cout << csv;
      manifest.seed(tim_seed);
      manifest.config({{"particles", tim_particles}, {"workers", tim_workers}, {"rounds", tim_rounds}});
      manifest.output(tim_out);
      manifest.write(manifest_path(manifest_flag, tim_out));
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const smsp::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const json::exception& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args);
}
