#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "io.hpp"
#include "sigkit/alloc_tracker.hpp"
#include "sigkit/backward.hpp"
#include "sigkit/logsig.hpp"
#include "sigkit/parallel.hpp"
#include "sigkit/sigcore.hpp"
#include "sigkit/testkit/oracles.hpp"
#include "sigkit/transforms.hpp"

namespace sigkit::cli {

namespace {

struct CommonOptions {
  std::string input;
  std::string output;
  bool path_id = false;
  bool leadlag = false;
  bool include_empty = false;
  bool float32 = false;
  int threads = 0;
  std::string wordset;
  std::uint32_t depth = 0;
};

void add_input(CLI::App* cmd, CommonOptions& o, bool required = true) {
  auto* opt = cmd->add_option("input,-i,--input", o.input, "CSV or .bin sample file");
  if (required) opt->required();
  cmd->add_flag("--path-id", o.path_id, "first CSV column is a path id");
  cmd->add_flag("--leadlag", o.leadlag, "apply the lead-lag transform first");
}

void add_output(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-o,--output", o.output, "output file (default stdout)");
  cmd->add_flag("--float32", o.float32, "single-precision accumulation");
}

void add_wordset(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-w,--wordset", o.wordset, "word-set JSON (inline or file)");
  cmd->add_option("-N,--depth", o.depth, "shorthand for a truncated set of this depth");
  cmd->add_flag("--include-empty", o.include_empty, "emit the empty-word column");
}

PathBatch load_paths(const CommonOptions& o) {
  PathBatch paths = read_paths_file(o.input, o.path_id);
  return o.leadlag ? lead_lag(paths) : paths;
}

WordSet resolve_wordset(const CommonOptions& o, std::size_t channels, std::size_t raw_channels) {
  WordSetDescriptor desc;
  if (!o.wordset.empty()) {
    desc = read_descriptor(o.wordset);
  } else if (o.depth > 0) {
    desc.type = WordSetDescriptor::Type::Truncated;
    desc.depth = o.depth;
  } else {
    throw Error(ErrorKind::Parse, "a word set is required (--wordset or --depth)");
  }
  if (desc.d == 0) {
    desc.d = static_cast<std::uint32_t>(desc.type == WordSetDescriptor::Type::LeadLagSparse ? raw_channels
                                                                                             : channels);
  }
  if (o.include_empty) desc.include_empty = true;
  return build_wordset(desc);
}

ComputeOptions compute_options(const CommonOptions& o) {
  return ComputeOptions{o.threads, o.float32 ? Precision::Float32 : Precision::Float64};
}

template <class Fn>
void with_output(const CommonOptions& o, std::ostream& out, Fn&& fn) {
  if (o.output.empty()) {
    fn(out);
    return;
  }
  std::ofstream file(o.output);
  if (!file) throw Error(ErrorKind::Parse, "cannot open output file " + o.output);
  fn(file);
}

void write_batch(std::ostream& os, const CoefficientBatch& batch) {
  write_header(os, {}, batch.wordset().column_names());
  for (std::size_t b = 0; b < batch.batch(); ++b) write_row(os, {}, batch.row(b));
}

std::size_t raw_channels(const PathBatch& paths, bool leadlag) {
  return leadlag ? paths.channels() / 2 : paths.channels();
}

int cmd_sig(const CommonOptions& o, std::ostream& out) {
  const PathBatch paths = load_paths(o);
  const WordSet ws = resolve_wordset(o, paths.channels(), raw_channels(paths, o.leadlag));
  const auto sig = signature_forward(paths, ws, compute_options(o));
  with_output(o, out, [&](std::ostream& os) { write_batch(os, sig); });
  return kExitOk;
}

int cmd_logsig(const CommonOptions& o, std::ostream& out) {
  if (o.depth == 0) throw Error(ErrorKind::Parse, "logsig needs --depth");
  const PathBatch paths = load_paths(o);
  const auto log = logsignature_forward(paths, o.depth, compute_options(o));
  with_output(o, out, [&](std::ostream& os) { write_batch(os, log); });
  return kExitOk;
}

double verify_windows(const PathBatch& paths, const WordSet& ws, const WindowSpec& win,
                      const ComputeOptions& options, std::size_t& pairs) {
  const WordSet trunc = build_truncated(ws.alphabet().size, ws.max_length());
  double worst = 0.0;
  pairs = 0;
  for (std::size_t i = 0; i + 1 < win.size(); ++i) {
    if (win.pairs[i].second != win.pairs[i + 1].first) continue;
    ++pairs;
    const WindowSpec parts{{win.pairs[i], win.pairs[i + 1], {win.pairs[i].first, win.pairs[i + 1].second}}};
    const auto outs = signature_windows(paths, trunc, parts, options);
    const auto joined = chen_concat(outs[0], outs[1]);
    for (std::size_t b = 0; b < paths.batch(); ++b) {
      for (std::size_t k = 0; k < ws.size(); ++k) {
        const std::size_t idx = *trunc.index_of(ws.word(k));
        const double f = outs[2].coefficient(b, idx);
        worst = std::max(worst, std::abs(joined.coefficient(b, idx) - f) / std::max(1.0, std::abs(f)));
      }
    }
  }
  return worst;
}

int cmd_windows(const CommonOptions& o, const std::string& windows_file, bool verify, std::ostream& out,
                std::ostream& err) {
  const PathBatch paths = load_paths(o);
  const WordSet ws = resolve_wordset(o, paths.channels(), raw_channels(paths, o.leadlag));
  const WindowSpec win{read_windows(windows_file)};
  if (win.size() == 0) throw Error(ErrorKind::Parse, "windows file " + windows_file + " lists no windows");
  const auto outs = signature_windows(paths, ws, win, compute_options(o));
  with_output(o, out, [&](std::ostream& os) {
    write_header(os, {"path", "window"}, ws.column_names());
    for (std::size_t b = 0; b < paths.batch(); ++b) {
      for (std::size_t k = 0; k < outs.size(); ++k) {
        write_row(os, {std::to_string(b), std::to_string(k)}, outs[k].row(b));
      }
    }
  });
  if (!verify) return kExitOk;
  constexpr double kVerifyTolerance = 1e-12;
  std::size_t pairs = 0;
  const double worst = verify_windows(paths, ws, win, compute_options(o), pairs);
  err << "verify: " << pairs << " adjacent window pairs, max_rel_err=" << format_number(worst)
      << (worst <= kVerifyTolerance ? " ok" : " FAILED") << '\n';
  return worst <= kVerifyTolerance ? kExitOk : kExitCheckFailed;
}

struct GradcheckSettings {
  std::uint64_t seed = 0;
  std::size_t batch = 2;
  std::size_t points = 7;
  std::size_t channels = 3;
};

bool oracle_accepts(const PathBatch& paths, const WordSet& ws) {
  std::size_t total = 1, level = 1;
  for (std::uint32_t n = 1; n <= ws.max_length(); ++n) {
    level *= paths.channels();
    total += level;
    if (total > testkit::kOracleMaxCoefficients) return false;
  }
  return paths.points() <= testkit::kOracleMaxPoints;
}

int cmd_gradcheck(const CommonOptions& o, const GradcheckSettings& g, std::ostream& out) {
  std::mt19937_64 rng(g.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  PathBatch paths;
  if (o.input.empty()) {
    std::vector<double> values(g.batch * g.points * g.channels);
    for (double& v : values) v = dist(rng);
    paths = PathBatch(g.batch, g.points, g.channels, std::move(values));
    if (o.leadlag) paths = lead_lag(paths);
  } else {
    paths = load_paths(o);
  }
  const WordSet ws = resolve_wordset(o, paths.channels(), raw_channels(paths, o.leadlag));
  std::vector<double> upstream(paths.batch() * ws.width());
  for (double& v : upstream) v = dist(rng);

  constexpr double kStep = 1e-5;
  constexpr double kTolerance = 1e-6;
  BackwardOptions bopts;
  bopts.threads = o.threads;
  const auto analytic = signature_backward(paths, ws, upstream, bopts);
  std::vector<double> fd;
  const bool use_oracle = oracle_accepts(paths, ws);
  if (use_oracle) {
    fd = testkit::finite_difference_grad(paths, ws, upstream, kStep);
  } else {
    fd = testkit::finite_difference(
        paths,
        [&](const PathBatch& p) {
          const auto sig = signature_forward(p, ws, ComputeOptions{o.threads, Precision::Float64});
          std::vector<double> loss(p.batch(), 0.0);
          for (std::size_t b = 0; b < p.batch(); ++b) {
            const auto row = sig.row(b);
            for (std::size_t i = sig.column_offset(); i < row.size(); ++i) loss[b] += upstream[b * ws.width() + i] * row[i];
          }
          return loss;
        },
        kStep);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    worst = std::max(worst, std::abs(analytic[i] - fd[i]) / std::max(1.0, std::abs(fd[i])));
  }
  const bool ok = worst <= kTolerance;
  out << "paths=" << paths.batch() << " points=" << paths.points() << " channels=" << paths.channels()
      << " words=" << ws.size() << " evaluator=" << (use_oracle ? "oracle" : "kernel") << '\n'
      << "max_rel_err=" << format_number(worst) << (ok ? " ok" : " FAILED") << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

struct BenchCase {
  std::string op = "forward";
  std::size_t batch = 1, d = 1, depth = 1, segments = 1;
  std::vector<int> threads{1};
  std::uint64_t seed = 0;
};

int cmd_bench(const std::string& config_path, const std::string& output, std::ostream& out) {
  nlohmann::json cfg;
  {
    std::ifstream in(config_path);
    if (!in) throw Error(ErrorKind::Parse, "cannot open bench config " + config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    if (ss.str().find_first_not_of(" \t\r\n") == std::string::npos) {
      throw Error(ErrorKind::Parse, "bench config " + config_path + " is empty");
    }
    try {
      cfg = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Parse, std::string("bench config: ") + e.what());
    }
  }
  std::vector<BenchCase> cases;
  int warmup = 3, repeats = 10;
  try {
    warmup = cfg.value("warmup", 3);
    repeats = cfg.value("repeats", 10);
    if (!cfg.contains("cases") || cfg.at("cases").empty()) {
      throw Error(ErrorKind::Parse, "bench config lists no cases");
    }
    for (const auto& c : cfg.at("cases")) {
      BenchCase bc;
      bc.op = c.value("op", std::string("forward"));
      bc.batch = c.at("B").get<std::size_t>();
      bc.d = c.at("d").get<std::size_t>();
      bc.depth = c.at("N").get<std::size_t>();
      bc.segments = c.at("M").get<std::size_t>();
      bc.seed = c.value("seed", std::uint64_t{0});
      if (c.contains("threads")) {
        bc.threads = c.at("threads").is_array() ? c.at("threads").get<std::vector<int>>()
                                                : std::vector<int>{c.at("threads").get<int>()};
      }
      if (bc.op != "forward" && bc.op != "backward" && bc.op != "logsig") {
        throw Error(ErrorKind::Parse, "unknown bench op \"" + bc.op + "\"");
      }
      cases.push_back(bc);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("bench config: ") + e.what());
  }
  if (repeats < 1 || warmup < 0) throw Error(ErrorKind::Parse, "bench needs repeats >= 1 and warmup >= 0");

  CommonOptions o;
  o.output = output;
  with_output(o, out, [&](std::ostream& os) {
    os << "op,B,d,N,M,threads,warmup,repeats,median_s,mean_s,paths_per_s,peak_alloc_bytes\n";
    for (const auto& bc : cases) {
      std::mt19937_64 rng(bc.seed);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      std::vector<double> values(bc.batch * (bc.segments + 1) * bc.d);
      for (double& v : values) v = dist(rng);
      const PathBatch paths(bc.batch, bc.segments + 1, bc.d, std::move(values));
      const WordSet ws = build_truncated(static_cast<std::uint32_t>(bc.d), static_cast<std::uint32_t>(bc.depth));
      std::vector<double> upstream;
      std::vector<double> grads;
      if (bc.op == "backward") {
        upstream.resize(bc.batch * ws.width());
        for (double& v : upstream) v = dist(rng);
        grads.resize(paths.values().size());
      }
      for (int threads : bc.threads) {
        auto once = [&] {
          if (bc.op == "forward") {
            (void)signature_forward(paths, ws, ComputeOptions{threads, Precision::Float64});
          } else if (bc.op == "logsig") {
            (void)logsignature_forward(paths, static_cast<std::uint32_t>(bc.depth),
                                       ComputeOptions{threads, Precision::Float64});
          } else {
            signature_backward_into(paths, ws, upstream, grads, BackwardOptions{threads, 0});
          }
        };
        for (int i = 0; i < warmup; ++i) once();
        std::size_t peak = 0;
        {
          alloc::PeakScope scope;
          once();
          peak = scope.additional();
        }
        std::vector<double> times;
        for (int i = 0; i < repeats; ++i) {
          const auto t0 = std::chrono::steady_clock::now();
          once();
          times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
        const double mean = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
        std::sort(times.begin(), times.end());
        const std::size_t n = times.size();
        const double median = n % 2 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
        os << bc.op << ',' << bc.batch << ',' << bc.d << ',' << bc.depth << ',' << bc.segments << ','
           << resolve_threads(threads) << ',' << warmup << ',' << repeats << ',' << format_number(median) << ','
           << format_number(mean) << ',' << format_number(static_cast<double>(bc.batch) / median) << ','
           << peak << '\n';
      }
    }
  });
  return kExitOk;
}

int cmd_words(const CommonOptions& o, std::ostream& out) {
  if (o.wordset.empty()) throw Error(ErrorKind::Parse, "words needs --wordset");
  const WordSet ws = resolve_wordset(o, 0, 0);
  with_output(o, out, [&](std::ostream& os) {
    os << "index,word\n";
    const auto names = ws.column_names();
    for (std::size_t i = 0; i < names.size(); ++i) os << i << ',' << names[i] << '\n';
  });
  return kExitOk;
}

int cmd_oracle(const CommonOptions& o, std::ostream& out) {
  if (o.depth == 0) throw Error(ErrorKind::Parse, "oracle needs --depth");
  const PathBatch paths = load_paths(o);
  const WordSet ws = build_truncated(static_cast<std::uint32_t>(paths.channels()), o.depth)
                         .with_empty(o.include_empty);
  const CoefficientBatch batch(ws, paths.batch(), testkit::oracle_coefficients(paths, ws));
  with_output(o, out, [&](std::ostream& os) { write_batch(os, batch); });
  return kExitOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::InvalidLetter:
      return kExitParse;
    default:
      return kExitShape;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"sigkit: path signatures over word sets"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "worker cap (default: SIGKIT_THREADS or all cores)");

  CommonOptions sig_o, log_o, win_o, grad_o, words_o, oracle_o;
  std::string windows_file, bench_config, bench_output;
  bool verify = false;
  GradcheckSettings gset;

  auto* sig = app.add_subcommand("sig", "signature coefficients");
  add_input(sig, sig_o);
  add_wordset(sig, sig_o);
  add_output(sig, sig_o);

  auto* logsig = app.add_subcommand("logsig", "log-signature at Lyndon words");
  add_input(logsig, log_o);
  logsig->add_option("-N,--depth", log_o.depth, "truncation depth")->required();
  add_output(logsig, log_o);

  auto* windows = app.add_subcommand("windows", "signatures over sample windows");
  add_input(windows, win_o);
  add_wordset(windows, win_o);
  add_output(windows, win_o);
  windows->add_option("--windows", windows_file, "CSV of l,r sample indices")->required();
  windows->add_flag("--verify", verify, "check Chen recombination of adjacent windows");

  auto* gradcheck = app.add_subcommand("gradcheck", "analytic vs finite-difference gradients");
  add_input(gradcheck, grad_o, false);
  add_wordset(gradcheck, grad_o);
  gradcheck->add_option("--seed", gset.seed, "random seed");
  gradcheck->add_option("--batch", gset.batch, "random paths when no input");
  gradcheck->add_option("--points", gset.points, "samples per random path");
  gradcheck->add_option("--channels", gset.channels, "channels of random paths");

  auto* bench = app.add_subcommand("bench", "timing and allocation table");
  bench->add_option("config,--config", bench_config, "JSON bench config")->required();
  bench->add_option("-o,--output", bench_output, "output CSV");

  auto* words = app.add_subcommand("words", "list a word set");
  add_wordset(words, words_o);
  words->add_option("-o,--output", words_o.output, "output file");

  auto* oracle = app.add_subcommand("oracle", "dense brute-force signature (debugging)");
  add_input(oracle, oracle_o);
  oracle->add_option("-N,--depth", oracle_o.depth, "truncation depth")->required();
  oracle->add_flag("--include-empty", oracle_o.include_empty, "emit the empty-word column");
  oracle->add_option("-o,--output", oracle_o.output, "output file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }

  if (threads == 0) {
    if (const char* env = std::getenv("SIGKIT_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 0) {
        err << "error: SIGKIT_THREADS must be a nonnegative integer, got \"" << env << "\"\n";
        return kExitParse;
      }
      threads = static_cast<int>(v);
    }
  }
  set_default_threads(threads);

  try {
    if (*sig) return cmd_sig(sig_o, out);
    if (*logsig) return cmd_logsig(log_o, out);
    if (*windows) return cmd_windows(win_o, windows_file, verify, out, err);
    if (*gradcheck) return cmd_gradcheck(grad_o, gset, out);
    if (*bench) return cmd_bench(bench_config, bench_output, out);
    if (*words) return cmd_words(words_o, out);
    if (*oracle) return cmd_oracle(oracle_o, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kExitParse;
}

}  // namespace sigkit::cli
