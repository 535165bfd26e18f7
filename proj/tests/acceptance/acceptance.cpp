// Acceptance checks. Each check prints one line: PASS|FAIL <name>: <detail>.
// Usage: acceptance [--only NAME]... [--list]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "cli.hpp"
#include "sigkit/alloc_tracker.hpp"
#include "sigkit/backward.hpp"
#include "sigkit/logsig.hpp"
#include "sigkit/sigcore.hpp"
#include "sigkit/testkit/oracles.hpp"
#include "sigkit/transforms.hpp"

using namespace sigkit;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

PathBatch random_paths(std::mt19937_64& rng, std::size_t batch, std::size_t points, std::size_t d) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(batch * points * d);
  for (double& x : v) x = dist(rng);
  return PathBatch(batch, points, d, std::move(v));
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

PathBatch slice(const PathBatch& p, std::size_t l, std::size_t r) {
  const std::size_t d = p.channels();
  std::vector<double> v;
  for (std::size_t b = 0; b < p.batch(); ++b) {
    for (std::size_t j = l; j <= r; ++j) {
      const auto s = p.sample(b, j);
      v.insert(v.end(), s.begin(), s.end());
    }
  }
  return PathBatch(p.batch(), r - l + 1, d, std::move(v));
}

// Random subset of the truncated words containing at least one word whose
// length-1 prefix is missing, so the set is not prefix-closed.
WordSet random_custom(std::mt19937_64& rng, std::uint32_t d, std::uint32_t depth) {
  const WordSet full = build_truncated(d, depth);
  std::vector<std::vector<Letter>> words;
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (full.word(i).length > 1 && rng() % 3 == 0) words.push_back(full.letters(i));
  }
  if (words.empty()) words.push_back(full.letters(full.size() - 1));
  if (rng() % 2) words.push_back({});
  return build_custom(words, d);
}

WordSet random_anisotropic(std::mt19937_64& rng, std::uint32_t d) {
  std::uniform_real_distribution<double> g(1.0, 2.0), r(2.0, 4.0);
  AnisotropyWeights w;
  for (std::uint32_t i = 0; i < d; ++i) w.gamma.push_back(g(rng));
  w.cutoff = r(rng);
  return build_anisotropic(w);
}

// ---------------------------------------------------------------------------

Outcome dimension_facts() {
  const auto t0 = Clock::now();
  const std::size_t t63 = build_truncated(6, 3).size();
  const std::size_t t86 = build_truncated(8, 6).size();
  const std::size_t l63 = build_lyndon(6, 3).size();
  const std::size_t l46 = build_lyndon(4, 6).size();
  const double secs = seconds_since(t0);
  const bool ok = t63 == 258 && t86 == 299592 && l63 == 91 && l46 == 964 && secs < 1.0;
  return {ok, "truncated(6,3)=" + std::to_string(t63) + " truncated(8,6)=" + std::to_string(t86) +
                  " lyndon(6,3)=" + std::to_string(l63) + " lyndon(4,6)=" + std::to_string(l46) +
                  " time=" + num(secs) + "s (limit 1s)"};
}

Outcome oracle_equivalence() {
  constexpr double kTol = 1e-12;
  constexpr int kCases = 200;
  std::mt19937_64 rng(1001);
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int c = 0; c < kCases; ++c) {
    const auto d = static_cast<std::uint32_t>(uniform(rng, 1, 3));
    const auto depth = static_cast<std::uint32_t>(uniform(rng, 1, 4));
    const std::size_t m = uniform(rng, 0, 5);
    const auto paths = random_paths(rng, uniform(rng, 1, 3), m + 1, d);
    const WordSet ws = c % 4 == 3 ? random_custom(rng, d, depth) : build_truncated(d, depth);
    const auto sig = signature_forward(paths, ws);
    const auto oracle = testkit::oracle_coefficients(paths, ws);
    for (std::size_t i = 0; i < oracle.size(); ++i) worst = std::max(worst, rel(sig.values()[i], oracle[i]));
  }
  const double secs = seconds_since(t0);
  return {worst <= kTol && secs < 60.0, std::to_string(kCases) + " cases, max_rel_err=" + num(worst) +
                                            " (tol 1e-12), time=" + num(secs) + "s (limit 60s)"};
}

Outcome chen_and_inverse() {
  constexpr double kChenTol = 1e-12;
  constexpr double kInverseTol = 1e-10;
  constexpr int kCases = 100;
  std::mt19937_64 rng(1002);
  const auto t0 = Clock::now();
  double chen = 0.0, inverse = 0.0, unit = 0.0;
  for (int c = 0; c < kCases; ++c) {
    const auto d = static_cast<std::uint32_t>(uniform(rng, 1, 3));
    const auto depth = static_cast<std::uint32_t>(uniform(rng, 1, 4));
    const std::size_t m = uniform(rng, 2, 8);
    const auto paths = random_paths(rng, 2, m + 1, d);
    const WordSet ws = build_truncated(d, depth);
    const std::size_t k = uniform(rng, 1, m - 1);
    const auto full = signature_forward(paths, ws);
    const auto joined = chen_concat(signature_forward(slice(paths, 0, k), ws), signature_forward(slice(paths, k, m), ws));
    for (std::size_t i = 0; i < full.values().size(); ++i) chen = std::max(chen, rel(joined.values()[i], full.values()[i]));
    const auto inv = signature_inverse(full);
    const auto rev = signature_forward(time_reverse(paths), ws);
    for (std::size_t i = 0; i < rev.values().size(); ++i) inverse = std::max(inverse, rel(inv.values()[i], rev.values()[i]));
    for (double v : chen_concat(full, inv).values()) unit = std::max(unit, std::abs(v));
  }
  const double secs = seconds_since(t0);
  const bool ok = chen <= kChenTol && inverse <= kInverseTol && unit <= kInverseTol && secs < 30.0;
  return {ok, std::to_string(kCases) + " cases, chen max_rel_err=" + num(chen) + " (tol 1e-12), inverse max_rel_err=" +
                  num(inverse) + ", |S*S^-1 - 1|=" + num(unit) + " (tol 1e-10), time=" + num(secs) + "s (limit 30s)"};
}

Outcome shuffle_identity() {
  constexpr double kTol = 1e-10;
  constexpr int kPaths = 20;
  std::mt19937_64 rng(1003);
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t pairs = 0;
  for (std::uint32_t d = 2; d <= 3; ++d) {
    const WordSet ws = build_truncated(d, 4);
    std::vector<std::vector<Letter>> words;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (ws.word(i).length <= 3) words.push_back(ws.letters(i));
    }
    const auto paths = random_paths(rng, kPaths, 6, d);
    const auto sig = signature_forward(paths, ws);
    auto value = [&](std::size_t b, const std::vector<Letter>& w) {
      return sig.coefficient(b, *ws.index_of(encode_word(w, Alphabet{d})));
    };
    for (const auto& u : words) {
      for (const auto& v : words) {
        if (u.size() + v.size() > 4) continue;
        ++pairs;
        const auto sh = testkit::shuffle_enumerate(u, v);
        for (std::size_t b = 0; b < kPaths; ++b) {
          double sum = 0.0;
          for (const auto& w : sh) sum += value(b, w);
          worst = std::max(worst, rel(value(b, u) * value(b, v), sum));
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= kTol && secs < 30.0, std::to_string(pairs) + " word pairs x " + std::to_string(kPaths) +
                                            " paths, max_rel_err=" + num(worst) + " (tol 1e-10), time=" + num(secs) +
                                            "s (limit 30s)"};
}

Outcome gradient_correctness() {
  constexpr double kTol = 1e-6;
  constexpr double kStep = 1e-5;
  constexpr int kCases = 100;
  std::mt19937_64 rng(1004);
  const auto t0 = Clock::now();
  double worst = 0.0;
  int custom = 0, aniso = 0;
  for (int c = 0; c < kCases; ++c) {
    const auto d = static_cast<std::uint32_t>(uniform(rng, 1, 3));
    const auto depth = static_cast<std::uint32_t>(uniform(rng, 1, 4));
    const std::size_t m = uniform(rng, 1, 8);
    WordSet ws = build_truncated(d, depth);
    switch (c % 5) {
      case 1:
        ws = random_custom(rng, d, std::max<std::uint32_t>(depth, 2));
        ++custom;
        break;
      case 2:
        ws = random_anisotropic(rng, d);
        ++aniso;
        break;
      case 3:
        if (d >= 2) ws = build_lyndon(d, depth);
        break;
      case 4: {
        GraphSpec g{d, {}};
        for (Letter i = 0; i < d; ++i) {
          for (Letter j = 0; j < d; ++j) {
            if (rng() % 2) g.edges.emplace_back(i, j);
          }
        }
        ws = build_graph(g, depth);
        break;
      }
      default:
        break;
    }
    const auto paths = random_paths(rng, 2, m + 1, d);
    const auto upstream = random_vector(rng, 2 * ws.width());
    const auto analytic = signature_backward(paths, ws, upstream);
    const auto fd = testkit::finite_difference_grad(paths, ws, upstream, kStep);
    for (std::size_t i = 0; i < fd.size(); ++i) worst = std::max(worst, rel(analytic[i], fd[i]));
  }
  const double secs = seconds_since(t0);
  return {worst <= kTol && secs < 120.0,
          std::to_string(kCases) + " cases (" + std::to_string(custom) + " custom non-prefix-closed, " +
              std::to_string(aniso) + " anisotropic), max_rel_err=" + num(worst) + " (tol 1e-6), time=" + num(secs) +
              "s (limit 120s)"};
}

Outcome log_signature() {
  constexpr double kRestrictTol = 1e-12;
  constexpr double kSegmentTol = 1e-14;
  constexpr double kGradTol = 1e-6;
  std::mt19937_64 rng(1005);
  double restrict_err = 0.0, segment_err = 0.0, grad_err = 0.0;
  for (int c = 0; c < 40; ++c) {
    const auto d = static_cast<std::uint32_t>(uniform(rng, 2, 3));
    const auto depth = static_cast<std::uint32_t>(uniform(rng, 1, 5));
    const auto paths = random_paths(rng, 2, uniform(rng, 2, 8), d);
    const auto restricted = logsignature_forward(paths, depth);
    const WordSet full_ws = build_truncated(d, depth);
    const auto full = tensor_log(signature_forward(paths, full_ws));
    const WordSet& lyndon = restricted.wordset();
    for (std::size_t b = 0; b < 2; ++b) {
      for (std::size_t i = 0; i < lyndon.size(); ++i) {
        restrict_err = std::max(restrict_err, rel(restricted.coefficient(b, i),
                                                  full.coefficient(b, *full_ws.index_of(lyndon.word(i)))));
      }
    }
  }
  for (int c = 0; c < 40; ++c) {
    const auto d = static_cast<std::uint32_t>(uniform(rng, 1, 4));
    const auto depth = d == 1 ? 1u : static_cast<std::uint32_t>(uniform(rng, 1, 5));
    const auto paths = random_paths(rng, 1, 2, d);
    const auto log = logsignature_forward(paths, depth);
    for (std::size_t i = 0; i < log.width(); ++i) {
      const double expected = i < d ? paths.increment(0, 1, i) : 0.0;
      segment_err = std::max(segment_err, std::abs(log.values()[i] - expected));
    }
  }
  for (int c = 0; c < 20; ++c) {
    const auto d = static_cast<std::uint32_t>(uniform(rng, 2, 3));
    const auto depth = static_cast<std::uint32_t>(uniform(rng, 1, 4));
    const auto paths = random_paths(rng, 2, uniform(rng, 2, 6), d);
    const WordSet lyndon = build_lyndon(d, depth);
    const auto g = random_vector(rng, 2 * lyndon.size());
    const auto analytic = logsignature_backward(paths, depth, g);
    const auto fd = testkit::finite_difference(
        paths,
        [&](const PathBatch& p) {
          std::vector<double> loss(p.batch(), 0.0);
          const auto dense = testkit::dense_signature_oracle(p, depth);
          for (std::size_t b = 0; b < p.batch(); ++b) {
            const auto log = testkit::dense_log(dense[b]);
            for (std::size_t i = 0; i < lyndon.size(); ++i) loss[b] += g[b * lyndon.size() + i] * log.at(lyndon.letters(i));
          }
          return loss;
        },
        1e-5);
    for (std::size_t i = 0; i < fd.size(); ++i) grad_err = std::max(grad_err, rel(analytic[i], fd[i]));
  }
  const bool ok = restrict_err <= kRestrictTol && segment_err <= kSegmentTol && grad_err <= kGradTol;
  return {ok, "restricted vs full log max_rel_err=" + num(restrict_err) + " (tol 1e-12), single segment max_abs_err=" +
                  num(segment_err) + " (tol 1e-14), backward vs FD max_rel_err=" + num(grad_err) + " (tol 1e-6)"};
}

Outcome windows() {
  constexpr double kSliceTol = 1e-14;
  constexpr double kVerifyTol = 1e-12;  // enforced inside the CLI --verify
  constexpr int kSets = 50;
  std::mt19937_64 rng(1006);
  double worst = 0.0;
  for (int c = 0; c < kSets; ++c) {
    const auto d = static_cast<std::uint32_t>(uniform(rng, 1, 3));
    const auto depth = static_cast<std::uint32_t>(uniform(rng, 1, 4));
    const std::size_t m = uniform(rng, 3, 12);
    const auto paths = random_paths(rng, 2, m + 1, d);
    const WordSet ws = c % 3 == 2 ? random_custom(rng, d, std::max<std::uint32_t>(depth, 2)) : build_truncated(d, depth);
    WindowSpec win;
    for (std::size_t k = uniform(rng, 1, 6); k > 0; --k) {
      const std::size_t l = uniform(rng, 0, m - 1);
      win.pairs.emplace_back(l, uniform(rng, l + 1, m));
    }
    const auto outs = signature_windows(paths, ws, win);
    for (std::size_t k = 0; k < win.size(); ++k) {
      const auto ref = signature_forward(slice(paths, win.pairs[k].first, win.pairs[k].second), ws);
      for (std::size_t i = 0; i < ref.values().size(); ++i) worst = std::max(worst, rel(outs[k].values()[i], ref.values()[i]));
    }
  }

  // Chen recombination through the command line.
  const auto dir = std::filesystem::temp_directory_path();
  const std::string tag = std::to_string(::getpid());
  int verify_failures = 0, verify_runs = 0;
  for (int c = 0; c < 10; ++c) {
    const std::size_t d = uniform(rng, 1, 3);
    const std::size_t m = uniform(rng, 4, 12);
    const auto paths = random_paths(rng, 2, m + 1, d);
    const std::string input = (dir / ("sigkit_acc_" + tag + "_paths.csv")).string();
    const std::string wfile = (dir / ("sigkit_acc_" + tag + "_win.csv")).string();
    {
      std::ofstream f(input);
      f.precision(17);
      for (std::size_t b = 0; b < 2; ++b) {
        for (std::size_t j = 0; j <= m; ++j) {
          for (std::size_t ch = 0; ch < d; ++ch) f << (ch ? "," : "") << paths.at(b, j, ch);
          f << '\n';
        }
        f << '\n';
      }
      std::ofstream w(wfile);
      const std::size_t k1 = uniform(rng, 1, m - 2), k2 = uniform(rng, k1 + 1, m - 1);
      w << "0," << k1 << '\n' << k1 << ',' << k2 << '\n' << k2 << ',' << m << '\n';
    }
    std::ostringstream out, err;
    const int code = cli::run({"windows", input, "-N", std::to_string(uniform(rng, 1, 4)), "--windows", wfile, "--verify"},
                              out, err);
    ++verify_runs;
    if (code != 0) ++verify_failures;
    std::filesystem::remove(input);
    std::filesystem::remove(wfile);
  }
  const bool ok = worst <= kSliceTol && verify_failures == 0;
  return {ok, std::to_string(kSets) + " window sets, max_rel_err vs sliced forward=" + num(worst) +
                  " (tol 1e-14); --verify passed " + std::to_string(verify_runs - verify_failures) + "/" +
                  std::to_string(verify_runs) + " (tol " + num(kVerifyTol) + ")"};
}

Outcome memory_contract() {
  constexpr double kMaxRatio = 2.0;
  std::mt19937_64 rng(1007);
  const WordSet ws = build_truncated(3, 4);
  auto measure = [&](std::size_t m) {
    const auto paths = random_paths(rng, 8, m + 1, 3);
    const auto upstream = random_vector(rng, 8 * ws.width());
    std::vector<double> out(paths.values().size());
    signature_backward_into(paths, ws, upstream, out);  // warm the thread pool
    alloc::PeakScope scope;
    signature_backward_into(paths, ws, upstream, out);
    return scope.additional();
  };
  // the hook must see a known allocation, otherwise zeros below mean nothing
  std::size_t calibration = 0;
  {
    alloc::PeakScope scope;
    std::vector<double> probe(1 << 17, 1.0);
    calibration = scope.additional();
    if (probe[7] != 1.0) calibration = 0;
  }
  const bool hook_ok = calibration >= (1u << 17) * sizeof(double);
  const std::size_t small = measure(100);
  const std::size_t large = measure(10000);
  // +1 byte keeps the ratio defined when nothing is allocated
  const double ratio = static_cast<double>(std::max(small, large) + 1) / static_cast<double>(std::min(small, large) + 1);
  return {hook_ok && ratio < kMaxRatio,
          "peak extra bytes M=100: " + std::to_string(small) + ", M=10000: " + std::to_string(large) +
              ", ratio=" + num(ratio) + " (limit < 2); hook calibration saw " + std::to_string(calibration) +
              " bytes for a 1 MiB vector"};
}

Outcome parallel_scaling() {
  constexpr double kMinSpeedup = 2.0;
  constexpr int kRepeats = 3;
  std::mt19937_64 rng(1008);
  const auto paths = random_paths(rng, 64, 1001, 4);
  const WordSet ws = build_truncated(4, 6);
  auto median_time = [&](int threads) {
    std::vector<double> t;
    (void)signature_forward(paths, ws, ComputeOptions{threads, Precision::Float64});
    for (int i = 0; i < kRepeats; ++i) {
      const auto t0 = Clock::now();
      (void)signature_forward(paths, ws, ComputeOptions{threads, Precision::Float64});
      t.push_back(seconds_since(t0));
    }
    std::sort(t.begin(), t.end());
    return t[kRepeats / 2];
  };
  const double t1 = median_time(1);
  const double t4 = median_time(4);
  const double speedup = t1 / t4;
  return {speedup >= kMinSpeedup, "1 thread " + num(t1) + "s, 4 threads " + num(t4) + "s, speedup=" + num(speedup) +
                                      " (need >= 2), hardware threads=" +
                                      std::to_string(std::thread::hardware_concurrency())};
}

Outcome lead_lag_area() {
  constexpr double kTol = 1e-12;
  std::mt19937_64 rng(1009);
  double worst = 0.0;
  for (int c = 0; c < 50; ++c) {
    const auto d = static_cast<std::uint32_t>(uniform(rng, 1, 3));
    const std::size_t m = uniform(rng, 1, 20);
    const auto paths = random_paths(rng, 1, m + 1, d);
    const auto ll = lead_lag(paths);
    const WordSet ws = build_truncated(2 * d, 2);
    const auto sig = signature_forward(ll, ws);
    const Alphabet a{2 * d};
    for (Letter i = 0; i < d; ++i) {
      const double area = sig.coefficient(0, *ws.index_of(encode_word(std::vector<Letter>{i, d + i}, a))) -
                          sig.coefficient(0, *ws.index_of(encode_word(std::vector<Letter>{d + i, i}, a)));
      double qv = 0.0;
      for (std::size_t j = 1; j <= m; ++j) qv += paths.increment(0, j, i) * paths.increment(0, j, i);
      worst = std::max(worst, rel(area, -qv));
    }
  }
  return {worst <= kTol, "50 paths, max_rel_err of S(lag.lead)-S(lead.lag) vs -sum(dX^2)=" + num(worst) + " (tol 1e-12)"};
}

struct Check {
  const char* name;
  std::function<Outcome()> fn;
};

const std::vector<Check>& checks() {
  static const std::vector<Check> all{
      {"dimension_facts", dimension_facts},
      {"oracle_equivalence", oracle_equivalence},
      {"chen_and_inverse", chen_and_inverse},
      {"shuffle_identity", shuffle_identity},
      {"gradient_correctness", gradient_correctness},
      {"log_signature", log_signature},
      {"windows", windows},
      {"memory_contract", memory_contract},
      {"parallel_scaling", parallel_scaling},
      {"lead_lag", lead_lag_area},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--list") {
      for (const auto& c : checks()) std::cout << c.name << '\n';
      return 0;
    }
    if (arg == "--only" && i + 1 < argc) {
      only.insert(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only NAME]... [--list]\n";
      return 2;
    }
  }
  int failures = 0, ran = 0;
  for (const auto& c : checks()) {
    if (!only.empty() && !only.count(c.name)) continue;
    ++ran;
    Outcome o{false, ""};
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail << std::endl;
    if (!o.pass) ++failures;
  }
  if (ran == 0) {
    std::cerr << "no matching checks\n";
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
