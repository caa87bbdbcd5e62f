// Copyright 2026 The bfl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "bfl/bfl.hpp"

namespace bfl::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

enum ExitCode { exit_ok = 0, exit_validation = 1, exit_accuracy = 2 };

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// "(0,0) (1,0.5)" -> path points
inline std::vector<PathPoint> parse_points(const std::string& s) {
  static const std::regex re(R"(\(\s*([-+]?\d+)\s*,\s*([^\)\s]+)\s*\))");
  std::vector<PathPoint> out;
  std::string rest = s;
  for (std::sregex_iterator it(s.begin(), s.end(), re), end; it != end; ++it) {
    try {
      std::size_t used = 0;
      const double t = std::stod((*it)[2].str(), &used);
      if (used != (*it)[2].str().size()) throw std::invalid_argument("trailing");
      out.push_back({std::stoi((*it)[1].str()), t});
    } catch (const std::exception&) {
      throw InvalidArgument("cannot parse path point '" + it->str() + "'");
    }
  }
  const std::string stripped = std::regex_replace(s, re, "");
  if (stripped.find_first_not_of(" \t,;") != std::string::npos || out.empty())
    throw InvalidArgument("points must look like \"(alpha,t) (alpha,t) ...\"");
  return out;
}

struct Grid {
  double lo = 0.0, hi = 10.0;
  int count = 64;
};

inline Grid parse_grid(const std::string& s) {
  Grid g;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.count) || c1 != ':' || c2 != ':' || !in.eof())
    throw InvalidArgument("grid must look like lo:hi:count");
  if (g.count < 1 || !(g.lo <= g.hi)) throw InvalidArgument("grid needs count >= 1 and lo <= hi");
  return g;
}

inline std::vector<double> grid_points(const Grid& g) {
  std::vector<double> v(g.count);
  for (int i = 0; i < g.count; ++i)
    v[i] = g.count == 1 ? g.lo : g.lo + (g.hi - g.lo) * i / (g.count - 1);
  return v;
}

// Empty or absent directory is fine; otherwise only with --force, in which case
// files this tool writes are removed first so nothing is appended to.
inline void prepare_out_dir(const std::string& dir, bool force) {
  if (dir.empty()) return;
  fs::path p(dir);
  if (fs::exists(p)) {
    if (!fs::is_directory(p)) throw InvalidArgument("output path is not a directory: " + dir);
    if (!fs::is_empty(p)) {
      if (!force) throw InvalidArgument("output directory is not empty (use --force): " + dir);
      static const std::regex ours(R"((sample_\d+\.csv|manifest\.json|report\.json|rho1\.csv|rho2\.csv|kernel\.csv|gap\.json|gibbs\.json))");
      for (const auto& e : fs::directory_iterator(p))
        if (e.is_regular_file() && std::regex_match(e.path().filename().string(), ours))
          fs::remove(e.path());
    }
  }
  fs::create_directories(p);
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << text;
}

inline json manifest_base(const std::string& command, const json& config) {
  return json{{"command", command}, {"library_version", version}, {"config", config}};
}

// Keys of the JSON config become flags unless the flag is already on the
// command line, so explicit flags win.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end()) return args;
  if (it + 1 == args.end()) throw InvalidArgument("--config needs a file");
  const std::string file = *(it + 1);
  args.erase(it, it + 2);
  std::ifstream in(file);
  if (!in) throw InvalidArgument("cannot read config file " + file);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad config file: ") + e.what());
  }
  if (!cfg.is_object()) throw InvalidArgument("config file must hold a JSON object");
  // a run manifest replays its resolved config
  if (cfg.contains("command") && cfg.contains("config")) cfg = cfg["config"];
  std::vector<std::string> extra;
  auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  for (auto& [key, v] : cfg.items()) {
    const std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    if (v.is_boolean()) {
      if (v.get<bool>()) extra.push_back(flag);
    } else if (v.is_array() && !v.empty() && v[0].is_array()) {
      for (const auto& group : v) {
        extra.push_back(flag);
        for (const auto& x : group) extra.push_back(scalar(x));
      }
    } else if (v.is_array()) {
      if (v.empty()) continue;
      extra.push_back(flag);
      for (const auto& x : v) extra.push_back(scalar(x));
    } else if (!v.is_null()) {
      extra.push_back(flag);
      extra.push_back(scalar(v));
    }
  }
  // subcommand name stays first
  args.insert(args.begin() + std::min<std::size_t>(1, args.size()), extra.begin(), extra.end());
  return args;
}

struct SampleArgs {
  int n = 0;
  std::vector<int> alphas{0};
  std::vector<double> times{1.0};
  std::size_t replicas = 1;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool force = false;
  unsigned workers = 0;
};

inline int cmd_sample(const SampleArgs& a, std::ostream& out) {
  FieldGrid grid{a.n, a.alphas, a.times};
  grid.validate();
  if (a.replicas < 1) throw InvalidArgument("--replicas must be >= 1");
  prepare_out_dir(a.out_dir, a.force);
  std::vector<std::string> files(a.replicas);
  parallel_for(a.replicas, [&](std::size_t r) {
    const auto s = sample_field(grid, RngStream(a.seed, r));
    std::string csv = "alpha,t,index,value\n";
    for (std::size_t ai = 0; ai < grid.alphas.size(); ++ai)
      for (std::size_t ti = 0; ti < grid.times.size(); ++ti) {
        const auto& ev = s.at(ai, ti);
        for (std::size_t j = 0; j < ev.size(); ++j)
          csv += std::to_string(grid.alphas[ai]) + "," + fmt_double(grid.times[ti]) + "," +
                 std::to_string(j + 1) + "," + fmt_double(ev[j]) + "\n";
      }
    char name[32];
    std::snprintf(name, sizeof name, "sample_%06zu.csv", r);
    files[r] = name;
    write_text(fs::path(a.out_dir) / name, csv);
  }, a.workers);
  json cfg{{"n", a.n}, {"alphas", a.alphas}, {"times", a.times}, {"replicas", a.replicas},
           {"seed", a.seed}, {"out-dir", a.out_dir}};
  json m = manifest_base("sample", cfg);
  m["N"] = a.n;
  m["grid"] = {{"alphas", a.alphas}, {"times", a.times}};
  m["seed"] = a.seed;
  m["stream"] = "replica index r uses stream id r";
  m["generator"] = RngStream::generator_name;
  m["files"] = files;
  write_text(fs::path(a.out_dir) / "manifest.json", m.dump(2) + "\n");
  out << "wrote " << a.replicas << " samples to " << a.out_dir << "\n";
  return exit_ok;
}

struct KernelArgs {
  bool bessel = false, raw = false, gauged = false;
  std::string ordering = "auto";
  int n = 0;
  std::string points = "(0,0)";
  std::string grid = "0:10:64";
  std::string out;
  bool strict = false;
  unsigned workers = 0;
};

inline Ordering resolve_ordering(const std::string& o, const std::vector<PathPoint>& path) {
  if (o == "time" || o == "time_like") return Ordering::time_like;
  if (o == "space" || o == "space_like") return Ordering::space_like;
  if (o != "auto") throw InvalidArgument("--ordering must be time, space or auto");
  if (path.size() < 2) return Ordering::time_like;
  switch (classify_path(path)) {
    case PathClass::space_like: return Ordering::space_like;
    case PathClass::neither: throw OrderingError("path is neither time-like nor space-like");
    default: return Ordering::time_like;
  }
}

inline KernelSpec make_spec(const std::string& kind, const std::string& ordering, int n,
                            const std::vector<PathPoint>& path) {
  const Ordering o = resolve_ordering(ordering, path);
  if (kind == "bessel") return KernelSpec::bessel(o, path);
  if (n < 1) throw InvalidArgument("--n is required for finite kernels");
  if (kind == "gauged") return KernelSpec::finite_gauged(o, n, path);
  if (kind == "finite-raw") return KernelSpec::finite_raw(o, n, path);
  throw InvalidArgument("unknown kernel kind '" + kind + "'");
}

inline int cmd_kernel(const KernelArgs& a, std::ostream& out) {
  const int kinds = a.bessel + a.raw + a.gauged;
  if (kinds > 1) throw InvalidArgument("choose one of --bessel, --finite-raw, --gauged");
  const std::string kind = a.raw ? "finite-raw" : a.gauged ? "gauged" : "bessel";
  const auto path = parse_points(a.points);
  const auto spec = make_spec(kind, a.ordering, a.n, path);
  const auto xs = grid_points(parse_grid(a.grid));
  const std::size_t P = path.size(), G = xs.size();
  std::vector<KernelValue> vals(P * P * G * G);
  parallel_for(P * G, [&](std::size_t row) {
    const std::size_t i = row / G, xi = row % G;
    for (std::size_t j = 0; j < P; ++j)
      for (std::size_t yi = 0; yi < G; ++yi)
        vals[((i * G + xi) * P + j) * G + yi] = evaluate(spec, i, xs[xi], j, xs[yi]);
  }, a.workers);
  std::string csv = "i,x,j,y,value,flag\n";
  std::size_t warnings = 0;
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t xi = 0; xi < G; ++xi)
      for (std::size_t j = 0; j < P; ++j)
        for (std::size_t yi = 0; yi < G; ++yi) {
          const auto& v = vals[((i * G + xi) * P + j) * G + yi];
          warnings += v.flag != AccuracyFlag::ok;
          csv += std::to_string(i) + "," + fmt_double(xs[xi]) + "," + std::to_string(j) + "," +
                 fmt_double(xs[yi]) + "," + fmt_double(v.value) + "," + to_string(v.flag) + "\n";
        }
  json cfg{{kind, true}, {"ordering", to_string(spec.ordering)}, {"n", a.n},
           {"points", a.points}, {"grid", a.grid}, {"out", a.out}, {"strict", a.strict}};
  if (a.out.empty()) {
    out << csv;
  } else {
    write_text(a.out, csv);
    write_text(a.out + ".manifest.json", manifest_base("kernel", cfg).dump(2) + "\n");
  }
  if (warnings) {
    std::cerr << "warning: " << warnings << " kernel values carry a tail warning\n";
    if (a.strict) return exit_accuracy;
  }
  return exit_ok;
}

struct GapArgs {
  int alpha = 0;
  double t = 0.0;
  std::string path;
  std::vector<std::vector<double>> interval;     // lo hi on slot 0
  std::vector<std::vector<double>> interval_at;  // slot lo hi
  int order = 100;
  int n_max = 10;
  std::string kernel = "bessel";
  std::string ordering = "auto";
  int n = 0;
  std::string out_dir;
  bool force = false;
  bool strict = false;
  double refinement_tolerance = 1e-7;
  unsigned workers = 0;
};

inline std::vector<PathPoint> read_path(const std::string& p) {
  if (fs::exists(p)) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
      std::vector<PathPoint> out;
      try {
        for (const auto& e : json::parse(text)) out.push_back({e.at("alpha").get<int>(), e.at("t").get<double>()});
      } catch (const json::exception& e) {
        throw InvalidArgument(std::string("bad path file: ") + e.what());
      }
      return out;
    }
    return parse_points(text);
  }
  return parse_points(p);
}

inline int cmd_gap(const GapArgs& a, std::ostream& out) {
  std::vector<PathPoint> path = a.path.empty() ? std::vector<PathPoint>{{a.alpha, a.t}} : read_path(a.path);
  const auto spec = make_spec(a.kernel, a.ordering, a.n, path);
  IntervalSet E;
  for (const auto& iv : a.interval) E.intervals.push_back({0, iv.at(0), iv.at(1), 0});
  for (const auto& iv : a.interval_at) {
    if (iv.at(0) < 0 || iv.at(0) != std::floor(iv.at(0))) throw InvalidArgument("bad slot in --interval-at");
    E.intervals.push_back({static_cast<std::size_t>(iv.at(0)), iv.at(1), iv.at(2), 0});
  }
  if (E.empty()) throw InvalidArgument("at least one --interval is required");
  prepare_out_dir(a.out_dir, a.force);
  const auto g = gap_probability_detailed(spec, E, a.order, a.workers);
  const auto g2 = gap_probability_detailed(spec, E, 2 * a.order, a.workers);
  const auto counts = count_distribution(spec, E, {std::min(a.n_max, static_cast<int>(E.intervals.size()) * a.order)}, a.order, a.workers);
  const double delta = std::abs(g2.gap - g.gap);
  const bool warn = g.flag != AccuracyFlag::ok || g2.flag != AccuracyFlag::ok || counts.flag != AccuracyFlag::ok;
  std::vector<std::vector<double>> ivs;
  for (const auto& I : E.intervals) ivs.push_back({static_cast<double>(I.slot), I.lower, I.upper});
  json cfg{{"kernel", a.kernel}, {"ordering", to_string(spec.ordering)}, {"n", a.n},
           {"path", a.path}, {"alpha", a.alpha}, {"t", a.t}, {"interval-at", ivs},
           {"order", a.order}, {"n-max", a.n_max}, {"strict", a.strict},
           {"refinement-tolerance", a.refinement_tolerance}};
  json res{{"gap", g.gap}, {"counts", counts.probabilities}, {"expected_count", g.expected_count},
           {"order", a.order}, {"refinement_delta", delta},
           {"accuracy_flag", warn ? "tail_warning" : "ok"}};
  if (!a.out_dir.empty()) {
    write_text(fs::path(a.out_dir) / "gap.json", res.dump(2) + "\n");
    write_text(fs::path(a.out_dir) / "manifest.json", manifest_base("gap", cfg).dump(2) + "\n");
  }
  res["config"] = cfg;
  out << res.dump(2) << "\n";
  if (a.strict && (warn || delta > a.refinement_tolerance)) return exit_accuracy;
  return exit_ok;
}

struct VerifyArgs {
  std::string in_dir, out_dir;
  std::optional<int> alpha;
  std::optional<double> t;
  int bins = 20;
  std::vector<double> interval;
  int order = 60;
  bool force = false;
};

inline int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const fs::path in(a.in_dir);
  std::ifstream mf(in / "manifest.json");
  if (!mf) throw InvalidArgument("no manifest.json in " + a.in_dir);
  json m;
  try {
    mf >> m;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad manifest: ") + e.what());
  }
  const int N = m.at("N").get<int>();
  const auto alphas = m.at("grid").at("alphas").get<std::vector<int>>();
  const auto times = m.at("grid").at("times").get<std::vector<double>>();
  const int alpha = a.alpha.value_or(alphas.at(0));
  const double t = a.t.value_or(times.at(0));
  if (a.bins < 1) throw InvalidArgument("--bins must be >= 1");
  std::vector<std::vector<double>> pts;
  for (const auto& f : m.at("files")) {
    std::ifstream csv(in / f.get<std::string>());
    if (!csv) throw InvalidArgument("missing sample file " + f.get<std::string>());
    std::string line;
    std::getline(csv, line);
    if (line != "alpha,t,index,value") throw InvalidArgument("bad CSV header in " + f.get<std::string>());
    std::vector<double> rep;
    while (std::getline(csv, line)) {
      int al = 0, idx = 0;
      double tt = 0, v = 0;
      if (std::sscanf(line.c_str(), "%d,%lf,%d,%lf", &al, &tt, &idx, &v) != 4)
        throw InvalidArgument("bad CSV row in " + f.get<std::string>());
      if (al == alpha && std::abs(tt - t) <= 1e-12 * std::max(1.0, t)) rep.push_back(v);
    }
    if (rep.empty()) throw InvalidArgument("no points at the requested (alpha, t)");
    pts.push_back(std::move(rep));
  }
  prepare_out_dir(a.out_dir, a.force);
  const auto spec = KernelSpec::finite_raw(Ordering::time_like, N, {{alpha, t}});
  std::vector<double> all;
  for (const auto& r : pts) all.insert(all.end(), r.begin(), r.end());
  std::sort(all.begin(), all.end());
  const double hi = all[std::min(all.size() - 1, static_cast<std::size_t>(0.995 * all.size()))];
  const auto edges = quantile_edges(pts, 0.0, hi, a.bins);
  const auto est = empirical_rho1(pts, edges);
  auto rho1 = [&](double x) { return kernel_finite(spec, 0, x, 0, x).value; };
  const auto rep = compare(est, rho1);
  std::string csv = "lower,upper,estimate,std_error,z\n";
  for (std::size_t b = 0; b < est.bins(); ++b)
    csv += fmt_double(edges[b]) + "," + fmt_double(edges[b + 1]) + "," + fmt_double(est.estimate[b]) +
           "," + fmt_double(est.std_error[b]) + "," + (std::isnan(rep.z[b]) ? std::string("nan") : fmt_double(rep.z[b])) + "\n";
  write_text(fs::path(a.out_dir) / "rho1.csv", csv);
  json report{{"replicas", pts.size()},
              {"rho1", {{"max_abs_z", rep.max_abs_z}, {"fraction_within_3", rep.fraction_within_3},
                        {"excluded_bins", rep.excluded}, {"pass", rep.pass}}}};
  if (!a.interval.empty()) {
    if (a.interval.size() != 2) throw InvalidArgument("--interval takes lo hi");
    IntervalSet E{{0, a.interval[0], a.interval[1], 0}};
    const auto eg = empirical_gap(pts, E);
    const double fg = gap_probability(spec, E, a.order);
    report["gap"] = {{"empirical", eg.probability}, {"std_error", eg.std_error}, {"fredholm", fg},
                     {"z", eg.std_error > 0 ? (eg.probability - fg) / eg.std_error : 0.0}};
  }
  json cfg{{"in-dir", a.in_dir}, {"out-dir", a.out_dir}, {"alpha", alpha}, {"t", t},
           {"bins", a.bins}, {"interval", a.interval}, {"order", a.order}};
  write_text(fs::path(a.out_dir) / "report.json", report.dump(2) + "\n");
  write_text(fs::path(a.out_dir) / "manifest.json", manifest_base("verify", cfg).dump(2) + "\n");
  out << report.dump(2) << "\n";
  return exit_ok;
}

struct GibbsArgs {
  int n = 100;
  std::vector<int> alpha_window{0, 3};
  int k = 2;
  std::size_t replicas = 1000;
  int runs = 20;
  std::uint64_t seed = 0;
  double t = 0.0;
  int gamma = -1;
  int line = 1;
  std::uint64_t max_attempts = 10'000'000;
  std::string out_dir;
  bool force = false;
  unsigned workers = 0;
};

struct GibbsRun {
  double ks_statistic, p_value, acceptance_rate;
};

// Originals from the first half of the replicas, resampled values from the
// second half, so the two KS samples are independent.
inline GibbsRun gibbs_run(const GibbsArgs& a, int run) {
  const int lo = a.alpha_window.at(0), hi = a.alpha_window.at(1);
  std::vector<int> alphas;
  for (int l = lo; l <= hi; ++l) alphas.push_back(l);
  const auto grid = FieldGrid::hard_edge(a.n, alphas, {a.t});
  const int gamma = a.gamma < 0 ? lo + 1 : a.gamma;
  std::vector<double> val(a.replicas);
  std::vector<std::uint64_t> att(a.replicas, 0);
  parallel_for(a.replicas, [&](std::size_t r) {
    const std::uint64_t stream = static_cast<std::uint64_t>(run) * a.replicas + r;
    const auto s = hard_edge_rescale(sample_field(grid, RngStream(a.seed, stream)), {a.t});
    LineEnsemble f{lo, {}};
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) f.rows.push_back(s.at(ai, 0));
    if (r < a.replicas / 2) {
      val[r] = f.rows[gamma - lo][a.line - 1];
    } else {
      RngStream g(a.seed ^ 0x9E3779B97F4A7C15ull, stream);
      const auto res = gibbs_resample(f, lo, hi, a.k, g, a.max_attempts);
      val[r] = res.field.rows[gamma - lo][a.line - 1];
      att[r] = res.attempts;
    }
  }, a.workers);
  const std::size_t half = a.replicas / 2;
  std::vector<double> orig(val.begin(), val.begin() + half), res(val.begin() + half, val.end());
  double attempts = 0;
  for (auto x : att) attempts += static_cast<double>(x);
  const auto ks = ks_two_sample(orig, res);
  return {ks.statistic, ks.p_value, static_cast<double>(res.size()) / attempts};
}

inline void validate(const GibbsArgs& a) {
  if (a.alpha_window.size() != 2) throw InvalidArgument("--alpha-window takes a b");
  const int lo = a.alpha_window[0], hi = a.alpha_window[1];
  if (lo < 0 || hi < lo + 2) throw InvalidArgument("--alpha-window needs 0 <= a and b >= a + 2");
  const int gamma = a.gamma < 0 ? lo + 1 : a.gamma;
  if (gamma <= lo || gamma >= hi) throw InvalidArgument("--gamma must be an interior alpha");
  if (a.k < 1 || a.k > a.n) throw InvalidArgument("--k must lie in [1, n]");
  if (a.line < 1 || a.line > a.k) throw InvalidArgument("--line must lie in [1, k]");
  if (a.replicas < 4) throw InvalidArgument("--replicas must be >= 4");
  if (a.runs < 1) throw InvalidArgument("--runs must be >= 1");
}

inline int cmd_gibbs(const GibbsArgs& a, std::ostream& out) {
  validate(a);
  prepare_out_dir(a.out_dir, a.force);
  json runs = json::array();
  int passes = 0;
  for (int r = 0; r < a.runs; ++r) {
    const auto g = gibbs_run(a, r);
    passes += g.p_value > 0.01;
    runs.push_back({{"ks_statistic", g.ks_statistic}, {"p_value", g.p_value},
                    {"acceptance_rate", g.acceptance_rate}});
  }
  json cfg{{"n", a.n}, {"alpha-window", a.alpha_window}, {"k", a.k}, {"replicas", a.replicas},
           {"runs", a.runs}, {"seed", a.seed}, {"t", a.t}, {"max-attempts", a.max_attempts},
           {"gamma", a.gamma < 0 ? a.alpha_window[0] + 1 : a.gamma}, {"line", a.line}};
  json res{{"runs", runs}, {"passes", passes}, {"pass", passes * 5 >= a.runs * 4}};
  if (!a.out_dir.empty()) {
    write_text(fs::path(a.out_dir) / "gibbs.json", res.dump(2) + "\n");
    write_text(fs::path(a.out_dir) / "manifest.json", manifest_base("gibbs-test", cfg).dump(2) + "\n");
  }
  res["config"] = cfg;
  out << res.dump(2) << "\n";
  return exit_ok;
}

// args excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Laguerre field simulation and hard-edge kernel toolkit", "bfl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version));

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "simulate the Laguerre field and write CSV samples");
  sample->add_option("--n", sa.n, "matrix size N")->required();
  sample->add_option("--alphas", sa.alphas, "comma-separated alphas")->delimiter(',');
  sample->add_option("--times", sa.times, "comma-separated absolute times")->delimiter(',');
  sample->add_option("--replicas", sa.replicas);
  sample->add_option("--seed", sa.seed);
  sample->add_option("--out-dir", sa.out_dir)->required();
  sample->add_flag("--force", sa.force);
  sample->add_option("--workers", sa.workers);

  KernelArgs ka;
  auto* kernel = app.add_subcommand("kernel", "tabulate a correlation kernel on a grid");
  kernel->add_flag("--bessel", ka.bessel);
  kernel->add_flag("--finite-raw", ka.raw);
  kernel->add_flag("--gauged", ka.gauged);
  kernel->add_option("--ordering", ka.ordering, "time, space or auto");
  kernel->add_option("--n", ka.n);
  kernel->add_option("--points", ka.points, "path as \"(alpha,t) (alpha,t)\"");
  kernel->add_option("--grid", ka.grid, "lo:hi:count");
  kernel->add_option("--out", ka.out, "CSV file (stdout if absent)");
  kernel->add_flag("--strict", ka.strict);
  kernel->add_option("--workers", ka.workers);

  GapArgs ga;
  auto* gap = app.add_subcommand("gap", "Fredholm gap probability and count distribution");
  gap->add_option("--alpha", ga.alpha);
  gap->add_option("--t", ga.t);
  gap->add_option("--path", ga.path, "path points or a file holding them");
  gap->add_option("--interval", ga.interval, "lo hi on the first path point")->expected(2);
  gap->add_option("--interval-at", ga.interval_at, "slot lo hi")->expected(3);
  gap->add_option("--order", ga.order);
  gap->add_option("--n-max", ga.n_max);
  gap->add_option("--kernel", ga.kernel, "bessel, gauged or finite-raw");
  gap->add_option("--ordering", ga.ordering);
  gap->add_option("--n", ga.n);
  gap->add_option("--out-dir", ga.out_dir);
  gap->add_flag("--force", ga.force);
  gap->add_flag("--strict", ga.strict);
  gap->add_option("--refinement-tolerance", ga.refinement_tolerance);
  gap->add_option("--workers", ga.workers);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "compare a sample directory against the kernel");
  verify->add_option("--in-dir", va.in_dir)->required();
  verify->add_option("--out-dir", va.out_dir)->required();
  verify->add_option("--alpha", va.alpha);
  verify->add_option("--t", va.t);
  verify->add_option("--bins", va.bins);
  verify->add_option("--interval", va.interval)->expected(2);
  verify->add_option("--order", va.order);
  verify->add_flag("--force", va.force);

  GibbsArgs gb;
  auto* gibbs = app.add_subcommand("gibbs-test", "Gibbs resampling invariance test");
  gibbs->add_option("--n", gb.n);
  gibbs->add_option("--alpha-window", gb.alpha_window)->expected(2);
  gibbs->add_option("--k", gb.k);
  gibbs->add_option("--replicas", gb.replicas);
  gibbs->add_option("--runs", gb.runs);
  gibbs->add_option("--seed", gb.seed);
  gibbs->add_option("--t", gb.t);
  gibbs->add_option("--gamma", gb.gamma);
  gibbs->add_option("--line", gb.line);
  gibbs->add_option("--max-attempts", gb.max_attempts);
  gibbs->add_option("--out-dir", gb.out_dir);
  gibbs->add_flag("--force", gb.force);
  gibbs->add_option("--workers", gb.workers);

  try {
    args = merge_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForVersion&) {
    out << version << "\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return exit_validation;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return exit_validation;
  }

  try {
    if (*sample) return cmd_sample(sa, out);
    if (*kernel) return cmd_kernel(ka, out);
    if (*gap) return cmd_gap(ga, out);
    if (*verify) return cmd_verify(va, out);
    if (*gibbs) return cmd_gibbs(gb, out);
  } catch (const AccuracyError& e) {
    err << "accuracy failure: " << e.what() << "\n";
    return exit_accuracy;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_validation;
  }
  return exit_validation;
}

inline int run(int argc, char** argv) {
  return run(std::vector<std::string>(argv + 1, argv + argc));
}

}  // namespace bfl::cli
