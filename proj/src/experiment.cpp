#include "ritv/experiment.hpp"

#include <fftw3.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "ritv/functionals.hpp"
#include "ritv/image_io.hpp"
#include "ritv/metrics.hpp"

#ifndef RITV_VERSION
#define RITV_VERSION "0.0.0"
#endif

namespace ritv {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Reads keys of one JSON object and rejects any it was not asked about.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }
  ~ObjectReader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError(where_ + ": unknown key '" + key + "'");
    }
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where_ + "." + key + ": " + e.what());
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  const std::string& where() const { return where_; }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

std::string_view metric_level_name(MetricLevel m) {
  switch (m) {
    case MetricLevel::None: return "none";
    case MetricLevel::SnrOnly: return "snr";
    case MetricLevel::All: return "all";
  }
  return "?";
}

MetricLevel parse_metric_level(std::string_view s) {
  for (MetricLevel m : {MetricLevel::None, MetricLevel::SnrOnly, MetricLevel::All})
    if (metric_level_name(m) == s) return m;
  throw ConfigError("metrics: expected none, snr or all, got '" + std::string(s) + "'");
}

std::string_view algorithm_name(Algorithm a) { return a == Algorithm::MalitskyPock ? "mp" : "gadmm"; }

Algorithm parse_algorithm(std::string_view s) {
  if (s == "mp") return Algorithm::MalitskyPock;
  if (s == "gadmm") return Algorithm::Gadmm;
  throw ConfigError("solver.algorithm: expected mp or gadmm, got '" + std::string(s) + "'");
}

std::string_view variant_name(GADMMVariant v) { return v == GADMMVariant::Linearized ? "linearized" : "as_printed"; }

GADMMVariant parse_variant(std::string_view s) {
  if (s == "linearized") return GADMMVariant::Linearized;
  if (s == "as_printed") return GADMMVariant::AsPrinted;
  throw ConfigError("solver.gadmm.variant: expected linearized or as_printed, got '" + std::string(s) + "'");
}

template <typename Fn>
auto rethrow_as_config(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const ParameterError& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const DimensionError& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const IoError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

json bm3d_json(const BM3DParams& p) {
  return {{"patch_size", p.patch_size},
          {"step", p.step},
          {"search_radius", p.search_radius},
          {"max_group", p.max_group},
          {"match_threshold", p.match_threshold}};
}

void read_bm3d(const json& j, BM3DParams& p) {
  ObjectReader r(j, "solver.bm3d");
  r.get("patch_size", p.patch_size);
  r.get("step", p.step);
  r.get("search_radius", p.search_radius);
  r.get("max_group", p.max_group);
  r.get("match_threshold", p.match_threshold);
}

void read_mp(const json& j, MPConfig& c) {
  ObjectReader r(j, "solver.mp");
  r.get("eta", c.eta);
  r.get("lambda", c.lambda);
  r.get("mu", c.mu);
  r.get("delta", c.delta);
  r.get("beta", c.beta);
  r.get("tau0", c.tau0);
  r.get("max_iters", c.max_iters);
  r.get("max_backtracks", c.max_backtracks);
  r.get("step_growth", c.step_growth);
  r.get("rel_change_tol", c.rel_change_tol);
  r.get("freeze_codebook", c.freeze_codebook);
  std::string mode(mp_mode_name(c.mode));
  r.get("mode", mode);
  c.mode = rethrow_as_config("solver.mp.mode", [&] { return parse_mp_mode(mode); });
}

void read_gadmm(const json& j, GADMMConfig& c) {
  ObjectReader r(j, "solver.gadmm");
  r.get("mu", c.mu);
  r.get("tau", c.tau);
  r.get("gamma", c.gamma);
  r.get("eta", c.eta);
  r.get("lambda", c.lambda);
  r.get("max_iters", c.max_iters);
  std::string variant(variant_name(c.variant));
  r.get("variant", variant);
  c.variant = parse_variant(variant);
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  return out;
}

RealImage abs_error(const RealImage& u, const RealImage& u0) {
  RealImage e(u.n());
  for (std::size_t k = 0; k < u.size(); ++k) e[k] = std::abs(u[k] - u0[k]);
  return e;
}

MetricReport safe_metrics(const RealImage& u, const RealImage& u0, MetricLevel level) {
  MetricReport m{std::nan(""), std::nan(""), std::nan("")};
  if (level == MetricLevel::None) return m;
  m.snr = snr(u, u0);
  if (level == MetricLevel::All) {
    if (u.n() >= 11) m.ssim = ssim(u, u0);
    try {
      m.hfen = hfen(u, u0);
    } catch (const ParameterError&) {
      // Reference without high-frequency content.
    }
  }
  return m;
}

std::string format_metrics(const MetricReport& m) {
  std::ostringstream s;
  s << std::setprecision(6) << "snr=" << m.snr << " ssim=" << m.ssim << " hfen=" << m.hfen;
  return s.str();
}

void write_versions(json& manifest) {
  json& v = manifest["versions"];
  v["ritv"] = RITV_VERSION;
  v["fftw"] = std::string(fftw_version);
  v["json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
              std::to_string(NLOHMANN_JSON_VERSION_PATCH);
  v["compiler"] = __VERSION__;
  v["threads"] = 1;
}

void write_manifest(const ExperimentConfig& cfg, std::string_view command, const std::vector<std::string>& outputs) {
  json m;
  m["command"] = command;
  m["config"] = to_json(cfg);
  m["config_hash"] = hex64(config_hash(cfg));
  m["seed"] = cfg.seed;
  m["outputs"] = outputs;
  write_versions(m);
  auto out = open_output(cfg.output / "manifest.json");
  out << m.dump(2) << '\n';
}

// Plots SNR and data term against iteration for every log listed.
void write_gnuplot(const fs::path& path, const std::vector<std::string>& logs) {
  auto out = open_output(path);
  out << "# gnuplot " << path.filename().string() << "\n"
      << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set multiplot layout 2,1\n"
      << "set ylabel 'SNR (dB)'\n"
      << "plot ";
  for (std::size_t i = 0; i < logs.size(); ++i)
    out << (i ? ", " : "") << "'" << logs[i] << "' using 'iter':'snr' with lines title '" << logs[i] << "'";
  out << "\nset ylabel 'data term'\nset logscale y\nplot ";
  for (std::size_t i = 0; i < logs.size(); ++i)
    out << (i ? ", " : "") << "'" << logs[i] << "' using 'iter':'data_term' with lines title '" << logs[i] << "'";
  out << "\nunset multiplot\n";
}

void write_log(const fs::path& path, const std::vector<IterationRecord>& log) {
  auto out = open_output(path);
  write_log_csv(out, log);
}

ReconResult run_solver(const ExperimentConfig& cfg, const ComplexImage& b, const SamplingMask& mask,
                       const RealImage* reference) {
  const MonitorOptions monitor{reference, cfg.metrics};
  if (cfg.algorithm == Algorithm::Gadmm) return gadmm(b, mask, cfg.gadmm, monitor);
  return malitsky_pock(b, mask, cfg.mp, monitor);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

double relative_gap(double a, double b) { return a == b ? 0.0 : std::abs(a - b) / std::abs(a); }

}  // namespace

void ExperimentConfig::validate() const {
  rethrow_as_config("config", [&] {
    mask.validate();
    NoiseSpec{noise_sigma, seed}.validate();
    mp.validate();
    gadmm.validate();
    return 0;
  });
  if (input.image.empty() && input.phantom_size < 16) throw ConfigError("input.phantom must be at least 16");
  if (benchmark.mp_modes.empty() && benchmark.gadmm_mu.empty()) throw ConfigError("benchmark: nothing to run");
  for (double mu : benchmark.gadmm_mu)
    if (!(mu > 0.0)) throw ConfigError("benchmark.gadmm_mu entries must be positive");
  if (!(benchmark.ritv_only_beta >= 0.0)) throw ConfigError("benchmark.ritv_only_beta must be nonnegative");
  if (quarter_turns < 0 || quarter_turns > 3) throw ConfigError("isotropy.quarter_turns must lie in 0..3");
  if (output.empty()) throw ConfigError("output must not be empty");
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["input"] = cfg.input.image.empty() ? json{{"phantom", cfg.input.phantom_size}}
                                       : json{{"image", cfg.input.image.string()}};
  j["mask"] = {{"kind", mask_kind_name(cfg.mask.kind)},
               {"rate", cfg.mask.rate},
               {"spokes", cfg.mask.spokes},
               {"symmetrize90", cfg.mask.symmetrize90}};
  j["noise"] = {{"sigma", cfg.noise_sigma}};
  const MPConfig& mp = cfg.mp;
  const GADMMConfig& g = cfg.gadmm;
  j["solver"] = {{"algorithm", algorithm_name(cfg.algorithm)},
                 {"mp",
                  {{"eta", mp.eta},
                   {"lambda", mp.lambda},
                   {"mu", mp.mu},
                   {"delta", mp.delta},
                   {"beta", mp.beta},
                   {"tau0", mp.tau0},
                   {"max_iters", mp.max_iters},
                   {"max_backtracks", mp.max_backtracks},
                   {"step_growth", mp.step_growth},
                   {"rel_change_tol", mp.rel_change_tol},
                   {"freeze_codebook", mp.freeze_codebook},
                   {"mode", mp_mode_name(mp.mode)}}},
                 {"gadmm",
                  {{"mu", g.mu},
                   {"tau", g.tau},
                   {"gamma", g.gamma},
                   {"eta", g.eta},
                   {"lambda", g.lambda},
                   {"max_iters", g.max_iters},
                   {"variant", variant_name(g.variant)}}},
                 {"bm3d", bm3d_json(mp.bm3d)}};
  json modes = json::array();
  for (MPMode m : cfg.benchmark.mp_modes) modes.push_back(mp_mode_name(m));
  j["benchmark"] = {{"mp_modes", modes},
                    {"gadmm_mu", cfg.benchmark.gadmm_mu},
                    {"ritv_only_beta", cfg.benchmark.ritv_only_beta}};
  j["isotropy"] = {{"quarter_turns", cfg.quarter_turns}, {"ritv_values", cfg.ritv_values}, {"reconstruct", cfg.reconstruct}};
  j["metrics"] = metric_level_name(cfg.metrics);
  j["output"] = cfg.output.string();
  j["seed"] = cfg.seed;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  {
    ObjectReader r(j, "config");
    r.get("name", cfg.name);
    if (const json* in = r.child("input")) {
      ObjectReader ri(*in, "input");
      ri.get("phantom", cfg.input.phantom_size);
      std::string image;
      ri.get("image", image);
      cfg.input.image = image;
      if (in->contains("phantom") && in->contains("image"))
        throw ConfigError("input: give either phantom or image, not both");
    }
    if (const json* m = r.child("mask")) {
      ObjectReader rm(*m, "mask");
      std::string kind(mask_kind_name(cfg.mask.kind));
      rm.get("kind", kind);
      cfg.mask.kind = rethrow_as_config("mask.kind", [&] { return parse_mask_kind(kind); });
      rm.get("rate", cfg.mask.rate);
      rm.get("spokes", cfg.mask.spokes);
      rm.get("symmetrize90", cfg.mask.symmetrize90);
    }
    if (const json* nz = r.child("noise")) {
      ObjectReader rn(*nz, "noise");
      rn.get("sigma", cfg.noise_sigma);
    }
    if (const json* s = r.child("solver")) {
      ObjectReader rs(*s, "solver");
      std::string algo(algorithm_name(cfg.algorithm));
      rs.get("algorithm", algo);
      cfg.algorithm = parse_algorithm(algo);
      if (const json* mp = rs.child("mp")) read_mp(*mp, cfg.mp);
      if (const json* g = rs.child("gadmm")) read_gadmm(*g, cfg.gadmm);
      if (const json* b = rs.child("bm3d")) read_bm3d(*b, cfg.mp.bm3d);
      cfg.gadmm.bm3d = cfg.mp.bm3d;
    }
    if (const json* b = r.child("benchmark")) {
      ObjectReader rb(*b, "benchmark");
      std::vector<std::string> modes;
      bool has_modes = b->contains("mp_modes");
      rb.get("mp_modes", modes);
      if (has_modes) {
        cfg.benchmark.mp_modes.clear();
        for (const auto& m : modes)
          cfg.benchmark.mp_modes.push_back(rethrow_as_config("benchmark.mp_modes", [&] { return parse_mp_mode(m); }));
      }
      rb.get("gadmm_mu", cfg.benchmark.gadmm_mu);
      rb.get("ritv_only_beta", cfg.benchmark.ritv_only_beta);
    }
    if (const json* iso = r.child("isotropy")) {
      ObjectReader ri(*iso, "isotropy");
      ri.get("quarter_turns", cfg.quarter_turns);
      ri.get("ritv_values", cfg.ritv_values);
      ri.get("reconstruct", cfg.reconstruct);
    }
    std::string metrics(metric_level_name(cfg.metrics));
    r.get("metrics", metrics);
    cfg.metrics = parse_metric_level(metrics);
    std::string output = cfg.output.string();
    r.get("output", output);
    cfg.output = output;
    r.get("seed", cfg.seed);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  ExperimentConfig cfg = config_from_json(j);
  if (!cfg.input.image.empty() && cfg.input.image.is_relative())
    cfg.input.image = path.parent_path() / cfg.input.image;
  return cfg;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) { return fnv1a(to_json(cfg).dump()); }

void apply_overrides(ExperimentConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.iters) {
    cfg.mp.max_iters = *o.iters;
    cfg.gadmm.max_iters = *o.iters;
  }
  if (o.out) cfg.output = *o.out;
  cfg.validate();
}

RealImage read_image(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8] = {};
  in.read(magic, sizeof magic);
  if (in.gcount() == 8 && std::string_view(magic, 8) == std::string_view(kGridMagic, 8)) return read_grid(path);
  return read_pgm(path);
}

ProblemData prepare_problem(const ExperimentConfig& cfg) {
  return rethrow_as_config("input", [&] {
    ProblemData p;
    p.reference = cfg.input.image.empty() ? shepp_logan(cfg.input.phantom_size) : read_image(cfg.input.image);
    MaskSpec spec = cfg.mask;
    spec.seed = cfg.seed;
    p.mask = make_mask(spec, p.reference.n());
    p.kspace = simulate_kspace(p.reference, p.mask, {cfg.noise_sigma, cfg.seed + 1});
    p.zero_filled = zero_fill(p.kspace, p.mask);
    return p;
  });
}

std::pair<std::size_t, MaskSpec> parse_mask_description(const std::string& text) {
  MaskSpec spec;
  std::size_t n = 128;
  const auto colon = text.find(':');
  spec.kind = rethrow_as_config("mask", [&] { return parse_mask_kind(text.substr(0, colon)); });
  if (colon != std::string::npos) {
    std::istringstream fields(text.substr(colon + 1));
    std::string item;
    while (std::getline(fields, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError("mask: expected key=value, got '" + item + "'");
      const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
      try {
        if (key == "n") n = std::stoul(value);
        else if (key == "rate") spec.rate = std::stod(value);
        else if (key == "spokes") spec.spokes = std::stoul(value);
        else if (key == "seed") spec.seed = std::stoull(value);
        else if (key == "sym") spec.symmetrize90 = std::stoi(value) != 0;
        else throw ConfigError("mask: unknown key '" + key + "'");
      } catch (const std::logic_error&) {
        throw ConfigError("mask: bad value for '" + key + "': '" + value + "'");
      }
    }
  }
  rethrow_as_config("mask", [&] {
    spec.validate();
    return 0;
  });
  if (n < 2) throw ConfigError("mask: n must be at least 2");
  return {n, spec};
}

int cmd_reconstruct(const ExperimentConfig& cfg, std::ostream& log) {
  const ProblemData p = prepare_problem(cfg);
  fs::create_directories(cfg.output);
  const auto t0 = Clock::now();
  const ReconResult r = run_solver(cfg, p.kspace, p.mask, &p.reference);
  const double wall = seconds_since(t0);

  write_pgm(cfg.output / "recon.pgm", r.u, PgmEncoding::Binary, true);
  write_grid(cfg.output / "recon.grid", r.u);
  write_pgm(cfg.output / "reference.pgm", p.reference, PgmEncoding::Binary, true);
  write_pgm(cfg.output / "zero_fill.pgm", p.zero_filled, PgmEncoding::Binary, true);
  write_pgm(cfg.output / "error.pgm", abs_error(r.u, p.reference), PgmEncoding::Binary, true);
  write_mask_pgm(cfg.output / "mask.pgm", p.mask);
  write_log(cfg.output / "log.csv", r.log);
  write_gnuplot(cfg.output / "plot.gp", {"log.csv"});

  const MetricReport m = safe_metrics(r.u, p.reference, cfg.metrics == MetricLevel::None ? MetricLevel::All : cfg.metrics);
  std::ostringstream summary;
  summary << cfg.name << ": " << algorithm_name(cfg.algorithm) << " iters=" << r.log.size() << ' ' << format_metrics(m)
          << " zero_fill_snr=" << std::setprecision(6) << snr(p.zero_filled, p.reference) << " wall_s=" << wall;
  open_output(cfg.output / "summary.txt") << summary.str() << '\n';
  write_manifest(cfg, "reconstruct",
                 {"recon.pgm", "recon.grid", "reference.pgm", "zero_fill.pgm", "error.pgm", "mask.pgm", "log.csv",
                  "plot.gp", "summary.txt"});
  log << summary.str() << '\n';
  return kExitOk;
}

int cmd_isotropy(const ExperimentConfig& cfg, std::ostream& log) {
  const ProblemData up = prepare_problem(cfg);
  const int turns = cfg.quarter_turns;
  const RealImage ref_rot = rotate90(up.reference, turns);
  const SamplingMask mask_rot = rotate_mask90(up.mask, turns);
  const ComplexImage b_rot = simulate_kspace(ref_rot, mask_rot, {cfg.noise_sigma, cfg.seed + 1});
  fs::create_directories(cfg.output);

  auto csv = open_output(cfg.output / "isotropy.csv");
  csv << "quantity,upright,rotated,relative_gap\n";
  auto row = [&](const char* name, double a, double b) {
    csv << name << ',' << a << ',' << b << ',' << relative_gap(a, b) << '\n';
  };

  std::ostringstream summary;
  summary << std::setprecision(6) << cfg.name << ": quarter_turns=" << turns;
  if (cfg.ritv_values) {
    const double tv_a = tv_value(up.reference), tv_b = tv_value(ref_rot);
    RITVEvalParams params;
    const RITVResult ra = ritv_value(up.reference, params);
    RITVState mapped = ra.state;
    for (int t = 0; t < turns; ++t) mapped = rotate_ritv_state(mapped);
    const RITVResult rb = ritv_value(ref_rot, params, &mapped);
    const RITVResult rb_cold = ritv_value(ref_rot, params);
    const RITVResult ra_warm = ritv_value(up.reference, params, &ra.state);
    row("tv", tv_a, tv_b);
    row("ritv_mapped_start", ra_warm.value, rb.value);
    row("ritv_cold_start", ra.value, rb_cold.value);
    summary << " tv_gap=" << relative_gap(tv_a, tv_b) << " ritv_gap=" << relative_gap(ra_warm.value, rb.value)
            << " ritv_cold_gap=" << relative_gap(ra.value, rb_cold.value);
  }

  std::vector<std::string> outputs{"isotropy.csv"};
  if (cfg.reconstruct) {
    const auto t0 = Clock::now();
    const ReconResult a = run_solver(cfg, up.kspace, up.mask, &up.reference);
    const ReconResult b = run_solver(cfg, b_rot, mask_rot, &ref_rot);
    const double wall = seconds_since(t0);
    const RealImage back = rotate90(a.u, turns);
    const double deficit = norm_p2(back - b.u, PNorm::Two) / norm_p2(a.u, PNorm::Two);
    const MetricReport ma = safe_metrics(a.u, up.reference, cfg.metrics);
    const MetricReport mb = safe_metrics(b.u, ref_rot, cfg.metrics);
    row("snr", ma.snr, mb.snr);
    row("ssim", ma.ssim, mb.ssim);
    row("hfen", ma.hfen, mb.hfen);
    csv << "deficit,," << ',' << deficit << '\n';

    write_pgm(cfg.output / "upright.pgm", a.u, PgmEncoding::Binary, true);
    write_pgm(cfg.output / "rotated.pgm", b.u, PgmEncoding::Binary, true);
    write_pgm(cfg.output / "deficit.pgm", abs_error(back, b.u), PgmEncoding::Binary, true);
    write_grid(cfg.output / "upright.grid", a.u);
    write_grid(cfg.output / "rotated.grid", b.u);
    write_log(cfg.output / "log_upright.csv", a.log);
    write_log(cfg.output / "log_rotated.csv", b.log);
    write_gnuplot(cfg.output / "plot.gp", {"log_upright.csv", "log_rotated.csv"});
    outputs.insert(outputs.end(), {"upright.pgm", "rotated.pgm", "deficit.pgm", "upright.grid", "rotated.grid",
                                   "log_upright.csv", "log_rotated.csv", "plot.gp"});
    summary << " deficit=" << deficit << " upright[" << format_metrics(ma) << "] rotated[" << format_metrics(mb)
            << "] wall_s=" << wall;
  }
  csv.close();
  open_output(cfg.output / "summary.txt") << summary.str() << '\n';
  outputs.push_back("summary.txt");
  write_manifest(cfg, "isotropy", outputs);
  log << summary.str() << '\n';
  return kExitOk;
}

int cmd_benchmark(const ExperimentConfig& cfg, std::ostream& log) {
  const ProblemData p = prepare_problem(cfg);
  fs::create_directories(cfg.output);
  const MonitorOptions monitor{&p.reference, cfg.metrics == MetricLevel::None ? MetricLevel::SnrOnly : cfg.metrics};

  struct Row {
    std::string label;
    ReconResult result;
    double wall;
  };
  std::vector<Row> rows;
  for (MPMode mode : cfg.benchmark.mp_modes) {
    MPConfig mp = cfg.mp;
    if (mode == MPMode::RITVOnly && cfg.benchmark.ritv_only_beta > 0.0) mp.beta = cfg.benchmark.ritv_only_beta;
    const auto t0 = Clock::now();
    auto r = mp_variant(p.kspace, p.mask, mp, mode, monitor);
    rows.push_back({"mp_" + std::string(mp_mode_name(mode)), std::move(r), seconds_since(t0)});
  }
  for (double mu : cfg.benchmark.gadmm_mu) {
    GADMMConfig g = cfg.gadmm;
    g.mu = mu;
    char label[48];
    std::snprintf(label, sizeof label, "gadmm_mu_%g", mu);
    const auto t0 = Clock::now();
    auto r = gadmm(p.kspace, p.mask, g, monitor);
    rows.push_back({label, std::move(r), seconds_since(t0)});
  }

  // Timing is kept out of comparison.csv so reruns compare byte for byte.
  auto csv = open_output(cfg.output / "comparison.csv");
  csv << "method,iterations,max_snr,final_snr,snr_drop,final_ssim,final_hfen,backtracks\n";
  std::ostringstream summary;
  summary << std::fixed << std::setprecision(2);
  summary << cfg.name << '\n' << std::left << std::setw(22) << "method" << std::right << std::setw(10) << "max SNR"
          << std::setw(11) << "final SNR" << std::setw(10) << "drop" << std::setw(10) << "wall s" << '\n';
  std::vector<std::string> outputs{"comparison.csv"}, logs;
  double best_mp = -INFINITY, best_gadmm = -INFINITY;
  for (const auto& row : rows) {
    const auto& lg = row.result.log;
    const double final_snr = lg.back().snr;
    const double drop = snr_drop(lg);
    const double max_snr = final_snr + drop;
    csv << row.label << ',' << lg.size() << ',' << max_snr << ',' << final_snr << ',' << drop << ','
        << lg.back().ssim << ',' << lg.back().hfen << ',' << row.result.total_backtracks << '\n';
    summary << std::left << std::setw(22) << row.label << std::right << std::setw(10) << max_snr << std::setw(11)
            << final_snr << std::setw(10) << drop << std::setw(10) << row.wall << '\n';
    const std::string name = "log_" + row.label + ".csv";
    write_log(cfg.output / name, lg);
    logs.push_back(name);
    if (row.label.starts_with("mp_")) best_mp = std::max(best_mp, final_snr);
    else best_gadmm = std::max(best_gadmm, final_snr);
  }
  csv.close();
  if (!cfg.benchmark.mp_modes.empty() && !cfg.benchmark.gadmm_mu.empty())
    summary << "mp minus best gadmm (final SNR, dB): " << best_mp - best_gadmm << '\n';
  write_gnuplot(cfg.output / "plot.gp", logs);
  outputs.insert(outputs.end(), logs.begin(), logs.end());
  outputs.insert(outputs.end(), {"plot.gp", "summary.txt"});
  open_output(cfg.output / "summary.txt") << summary.str();
  write_manifest(cfg, "benchmark", outputs);
  log << summary.str();
  return kExitOk;
}

int cmd_mask(const std::string& description, const fs::path& out, std::ostream& log) {
  const auto [n, spec] = parse_mask_description(description);
  const SamplingMask m = rethrow_as_config("mask", [&] { return make_mask(spec, n); });
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_mask_pgm(out, m);
  log << mask_kind_name(spec.kind) << " n=" << n << " samples=" << m.count() << " rate=" << std::setprecision(6)
      << m.rate() << '\n';
  return kExitOk;
}

int cmd_metrics(const fs::path& image, const fs::path& reference, std::ostream& log) {
  const auto [u, u0] = rethrow_as_config("metrics", [&] { return std::pair{read_image(image), read_image(reference)}; });
  if (u.n() != u0.n()) throw ConfigError("metrics: image sizes differ");
  log << format_metrics(safe_metrics(u, u0, MetricLevel::All)) << '\n';
  return kExitOk;
}

int run_config_command(const std::string& command, const fs::path& config_path, const Overrides& overrides,
                       std::ostream& log, std::ostream& err) {
  try {
    ExperimentConfig cfg = load_config(config_path);
    apply_overrides(cfg, overrides);
    if (command == "reconstruct") return cmd_reconstruct(cfg, log);
    if (command == "isotropy") return cmd_isotropy(cfg, log);
    if (command == "benchmark") return cmd_benchmark(cfg, log);
    err << "unknown command '" << command << "'\n";
    return kExitInvalidConfig;
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const SolverAbort& e) {
    err << "solver aborted: " << e.what() << '\n';
    return kExitSolverAbort;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace ritv
