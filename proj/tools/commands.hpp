#pragma once

// Subcommands of the striplab tool. Each command returns an exit code and
// prints one JSON document to `out`; failures print {"error": ...} as well.
//
//   0  success          2  budget not met / infeasible / precision exhausted
//   1  usage or input   3  scan finished without a hit

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "striplab/striplab.hpp"

namespace striplab::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_budget = 2, exit_no_hit = 3 };

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << text;
  if (!out) throw InvalidArgument("write to '" + path + "' failed");
}

/// A JSON argument given inline, as a file path, or (for targets) by name.
struct Input {
  json value;
  std::string source;  // "inline", "builtin" or the path
  std::string digest;  // sha256 of the raw text
};

inline Input load_json(const std::string& arg) {
  Input in;
  std::string text;
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) {
    text = arg;
    in.source = "inline";
  } else {
    text = read_file(arg);
    in.source = arg;
  }
  in.digest = sha256_hex(text);
  try {
    in.value = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed JSON in " + in.source + ": " + e.what());
  }
  return in;
}

/// "zeta", "conj", "abs", "identity", "constant:re,im", or JSON.
inline Input load_target(const std::string& arg) {
  Input in;
  const auto builtin = [&](json v) {
    in.value = std::move(v);
    in.source = "builtin";
    in.digest = sha256_hex(arg);
    return in;
  };
  if (arg == "zeta") return builtin({{"kind", "zeta"}});
  if (arg == "conj" || arg == "abs" || arg == "identity") return builtin({{"kind", "builtin"}, {"name", arg}});
  if (arg.rfind("constant:", 0) == 0) {
    const std::string rest = arg.substr(9);
    double re = 0.0, im = 0.0;
    char tail = 0;
    const int n = std::sscanf(rest.c_str(), "%lf,%lf%c", &re, &im, &tail);
    if (n == 1 && rest.find(',') == std::string::npos) im = 0.0;
    else if (n != 2) throw InvalidArgument("constant target must be constant:re or constant:re,im");
    return builtin({{"kind", "builtin"}, {"name", "constant"}, {"value", {re, im}}});
  }
  return load_json(arg);
}

inline json manifest(const std::string& command, json config, const std::vector<std::pair<std::string, Input>>& inputs,
                     double wall_seconds) {
  json digests = json::object();
  for (const auto& [name, in] : inputs) digests[name] = {{"source", in.source}, {"sha256", in.digest}};
  return json{{"command", command},
              {"config", std::move(config)},
              {"version", version},
              {"wall_time_seconds", wall_seconds},
              {"inputs", std::move(digests)}};
}

inline unsigned default_threads() {
  if (const char* env = std::getenv("STRIPLAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string("STRIPLAB_THREADS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

/// "t,D" rows with 17 significant digits.
inline std::string trace_csv(const ScanReport& r) {
  std::string out = "t,D\n";
  char buf[64];
  for (const TracePoint& p : r.trace) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.t, p.D);
    out += buf;
  }
  return out;
}

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct ApproxArgs {
  std::string set;
  std::string target;
  double eps = 0.0;
  int max_degree = 40;
  int lawson_iters = 30;
  std::string out_json;
};

struct ScanArgs {
  std::string set;
  std::string target;
  ScanConfig config;
  ZetaParams zeta;
  bool via_polynomial = false;
  int max_degree = 40;
  std::string out_csv;
  std::string out_json;
  int threads = 0;
};

struct ZetaArgs {
  double re = 0.0;
  double im = 0.0;
};

struct CantorArgs {
  int depth = 0;
};

inline int cmd_approx(const ApproxArgs& a, std::ostream& out) {
  Stopwatch clock;
  const Input set_in = load_json(a.set);
  const Input target_in = load_target(a.target);
  const CompactSet K = build_set(set_in.value);
  const TargetSpec spec = target_from_json(target_in.value);
  ApproxOptions opts;
  opts.lawson_iters = a.lawson_iters;
  const json config{{"eps", a.eps},
                    {"max_degree", a.max_degree},
                    {"lawson_iters", opts.lawson_iters},
                    {"max_h", opts.max_h},
                    {"grid_sample_limit", opts.grid_sample_limit},
                    {"set", to_json_value(K)},
                    {"target", to_json_value(spec)}};
  const std::vector<std::pair<std::string, Input>> inputs{{"set", set_in}, {"target", target_in}};

  json doc;
  int code = exit_ok;
  try {
    const NonvanishingApproximation r = approximate_nonvanishing(K, spec, a.eps, a.max_degree, opts);
    doc = {{"polynomial", to_json_value(r.polynomial)},
           {"fit", to_json_value(r.fit)},
           {"certificate", to_json_value(r.certificate, r.polynomial)},
           {"certified_error", r.certified_error()},
           {"eps", a.eps}};
  } catch (const BudgetNotMet& e) {
    code = exit_budget;
    doc = {{"error", e.what()}, {"best_fit", to_json_value(e.best)}, {"eps", a.eps}};
  } catch (const BudgetInfeasible& e) {
    code = exit_budget;
    doc = {{"error", e.what()}, {"eps", a.eps}};
  }
  doc["manifest"] = manifest("approx", config, inputs, clock.seconds());
  if (!a.out_json.empty()) write_file(a.out_json, doc.dump(2) + "\n");
  out << doc.dump(2) << "\n";
  return code;
}

inline int cmd_scan(ScanArgs a, std::ostream& out) {
  Stopwatch clock;
  a.config.threads = a.threads > 0 ? static_cast<unsigned>(a.threads) : default_threads();
  a.config.validate();
  const Input set_in = load_json(a.set);
  const Input target_in = load_target(a.target);
  const CompactSet K = build_set(set_in.value);
  const TargetSpec spec = target_from_json(target_in.value);
  const ZetaParams& params = a.zeta;

  const SampleGrid grid = discretize(K, a.config.grid_h);
  TargetFunction target = sample_target(spec, grid, params);
  double eps = a.config.eps;
  json substitute;
  if (a.via_polynomial) {
    // Scan against a nonvanishing g with |g - f| < eps/2, at threshold eps/2.
    ApproxOptions opts;
    opts.zeta = params;
    const NonvanishingApproximation g = approximate_nonvanishing(K, spec, eps / 2.0, a.max_degree, opts);
    for (std::size_t i = 0; i < grid.size(); ++i) target.samples[i] = g.polynomial(grid.points[i]);
    target.description = "nonvanishing polynomial for " + target.description;
    eps /= 2.0;
    substitute = {{"polynomial", to_json_value(g.polynomial)},
                  {"certified_error", g.certified_error()},
                  {"certificate", to_json_value(g.certificate, g.polynomial)}};
  }
  ScanConfig run = a.config;
  run.eps = eps;
  ScanReport report = scan_grid(grid, target, run, params);
  if (!inside_strip(grid)) report.warnings.push_back("set leaves the strip 1/2 < Re(z) < 1");

  json config = to_json_value(a.config);
  config["zeta"] = to_json_value(params);
  config["via_polynomial"] = a.via_polynomial;
  config["max_degree"] = a.max_degree;
  config["set"] = to_json_value(K);
  config["target"] = to_json_value(spec);
  const json man = manifest("scan", config, {{"set", set_in}, {"target", target_in}}, clock.seconds());

  json full = to_json_value(report);
  if (a.via_polynomial) full["substitute_target"] = substitute;
  full["manifest"] = man;
  if (!a.out_csv.empty()) write_file(a.out_csv, trace_csv(report));
  if (!a.out_json.empty()) write_file(a.out_json, full.dump(2) + "\n");
  json summary = full;
  summary.erase("trace");
  summary["trace_points"] = report.trace.size();
  out << summary.dump(2) << "\n";
  return report.hit_intervals.empty() ? exit_no_hit : exit_ok;
}

inline int cmd_zeta(const ZetaArgs& a, const ZetaParams& params, std::ostream& out) {
  Stopwatch clock;
  const cplx s(a.re, a.im);
  const ZetaValue v = zeta_em(s, params);
  json doc = to_json_value(v);
  doc["s"] = to_json_value(s);
  json config = to_json_value(params);
  config["re"] = a.re;
  config["im"] = a.im;
  doc["manifest"] = manifest("zeta", config, {}, clock.seconds());
  out << doc.dump(2) << "\n";
  return exit_ok;
}

inline int cmd_cantor(const CantorArgs& a, std::ostream& out) {
  Stopwatch clock;
  const auto intervals = fat_cantor(a.depth);
  json list = json::array();
  for (const Interval& iv : intervals) list.push_back({iv.lo, iv.hi});
  json doc{{"depth", a.depth}, {"intervals", std::move(list)}, {"total_length", total_length(intervals)}};
  doc["manifest"] = manifest("cantor", {{"depth", a.depth}}, {}, clock.seconds());
  out << doc.dump(2) << "\n";
  return exit_ok;
}

inline int fail(std::ostream& out, std::ostream& err, int code, const std::string& message) {
  err << "striplab: " << message << "\n";
  out << json{{"error", message}, {"exit_code", code}}.dump(2) << "\n";
  return code;
}

inline void add_zeta_options(CLI::App* cmd, ZetaParams& p) {
  cmd->add_option("--terms-per-unit-t", p.terms_per_unit_t, "Euler-Maclaurin cutoff N per unit of |Im s|")
      ->capture_default_str();
  cmd->add_option("--min-terms", p.min_terms, "smallest cutoff N")->capture_default_str();
  cmd->add_option("--bernoulli-terms", p.bernoulli_terms, "Bernoulli correction terms (<= 30)")->capture_default_str();
}

/// Entry point shared by main() and the tests. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"striplab: nonvanishing polynomial approximation and zeta shift scans"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version));

  ApproxArgs approx;
  auto* c_approx = app.add_subcommand("approx", "fit a target on K and repair the fit to be nonvanishing on K");
  c_approx->add_option("--set", approx.set, "set JSON (file or inline)")->required();
  c_approx->add_option("--target", approx.target, "target: conj|abs|identity|constant:re,im|JSON")->required();
  c_approx->add_option("--eps", approx.eps, "total error budget")->required();
  c_approx->add_option("--max-degree", approx.max_degree)->capture_default_str();
  c_approx->add_option("--lawson-iters", approx.lawson_iters)->capture_default_str();
  c_approx->add_option("--out-json", approx.out_json);

  ScanArgs scan;
  scan.config.step = 0.05;
  auto* c_scan = app.add_subcommand("scan", "scan D(t) = max |zeta(z + it) - f(z)| over t");
  c_scan->add_option("--set", scan.set, "set JSON (file or inline)")->required();
  c_scan->add_option("--target", scan.target, "target: zeta|conj|abs|identity|constant:re,im|JSON")->required();
  c_scan->add_option("--T", scan.config.T, "scan horizon")->required();
  c_scan->add_option("--step", scan.config.step)->capture_default_str();
  c_scan->add_option("--eps", scan.config.eps, "hit threshold")->required();
  c_scan->add_option("--refine-tol", scan.config.refine_tol)->capture_default_str();
  c_scan->add_option("--t-start", scan.config.t_start)->capture_default_str();
  c_scan->add_option("--grid-h", scan.config.grid_h, "covering radius for sampling K")->capture_default_str();
  c_scan->add_flag("--via-polynomial", scan.via_polynomial, "scan against a nonvanishing polynomial fit at eps/2");
  c_scan->add_option("--max-degree", scan.max_degree, "degree cap for --via-polynomial")->capture_default_str();
  c_scan->add_option("--out-csv", scan.out_csv);
  c_scan->add_option("--out-json", scan.out_json);
  c_scan->add_option("--threads", scan.threads, "worker threads (default: STRIPLAB_THREADS or 1)");
  add_zeta_options(c_scan, scan.zeta);

  ZetaArgs zeta;
  ZetaParams zeta_params;
  auto* c_zeta = app.add_subcommand("zeta", "evaluate zeta(re + i im)");
  c_zeta->add_option("--re", zeta.re)->required();
  c_zeta->add_option("--im", zeta.im)->capture_default_str();
  add_zeta_options(c_zeta, zeta_params);

  CantorArgs cantor;
  auto* c_cantor = app.add_subcommand("cantor", "fat Cantor intervals at a given depth");
  c_cantor->add_option("--depth", cantor.depth)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::CallForVersion&) {
    out << version << "\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    return fail(out, err, exit_usage, e.what());
  }

  try {
    if (c_approx->parsed()) return cmd_approx(approx, out);
    if (c_scan->parsed()) return cmd_scan(scan, out);
    if (c_zeta->parsed()) return cmd_zeta(zeta, zeta_params, out);
    if (c_cantor->parsed()) return cmd_cantor(cantor, out);
  } catch (const PrecisionExhausted& e) {
    return fail(out, err, exit_budget, e.what());
  } catch (const BudgetNotMet& e) {
    return fail(out, err, exit_budget, e.what());
  } catch (const BudgetInfeasible& e) {
    return fail(out, err, exit_budget, e.what());
  } catch (const std::exception& e) {
    return fail(out, err, exit_usage, e.what());
  }
  return fail(out, err, exit_usage, "no subcommand");
}

}  // namespace striplab::cli
