#pragma once

// Brute-force reference implementations. Nothing here calls the production
// kernels: signatures are built by materializing every tensor level and
// multiplying dense exponentials, which is slow but easy to trust.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sigkit/path.hpp"
#include "sigkit/wordsets.hpp"

namespace sigkit::testkit {

/// All levels 0..depth of a truncated tensor, level n stored densely with the
/// word (i_1..i_n) at sum_r i_r d^(n-r).
struct DenseTensor {
  std::uint32_t d = 1;
  std::uint32_t depth = 0;
  std::vector<std::vector<double>> levels;

  static DenseTensor zero(std::uint32_t d, std::uint32_t depth);
  static DenseTensor identity(std::uint32_t d, std::uint32_t depth);

  double at(std::span<const Letter> word) const;
  double& at(std::span<const Letter> word);
};

/// Largest number of coefficients (all levels) the oracles accept.
inline constexpr std::size_t kOracleMaxCoefficients = 8192;
inline constexpr std::size_t kOracleMaxPoints = 20001;

DenseTensor dense_product(const DenseTensor& a, const DenseTensor& b);
DenseTensor dense_exp(std::span<const double> increment, std::uint32_t depth);
/// log(a) by the plain power series sum_k (-1)^{k+1} (a-1)^k / k.
DenseTensor dense_log(const DenseTensor& a);
/// exp(x) = sum_k x^k / k! for x with zero constant term.
DenseTensor dense_exp_tensor(const DenseTensor& x);

/// Signature of one path given as points x d samples, by repeated dense
/// products S <- S ⊗ exp(ΔX_j). Refuses sizes above the guard.
DenseTensor dense_signature_oracle(std::span<const double> samples, std::size_t points,
                                   std::uint32_t d, std::uint32_t depth);
std::vector<DenseTensor> dense_signature_oracle(const PathBatch& paths, std::uint32_t depth);

/// Every interleaving of u and v that keeps each word's internal order,
/// listed with multiplicity (C(|u|+|v|, |u|) entries).
std::vector<std::vector<Letter>> shuffle_enumerate(std::span<const Letter> u,
                                                   std::span<const Letter> v);

/// Central differences of a per-path scalar objective with respect to every
/// sample coordinate. The step for coordinate x is h * max(1, |x|).
std::vector<double> finite_difference(
    const PathBatch& paths, const std::function<std::vector<double>(const PathBatch&)>& objective,
    double h);

/// Central-difference gradient of sum_w upstream[b][w] S(X_b, w) with the
/// dense oracle as the evaluator. upstream is B x ws.width().
std::vector<double> finite_difference_grad(const PathBatch& paths, const WordSet& ws,
                                           std::span<const double> upstream, double h = 1e-5);

/// Oracle values of every column of ws (ε column = 1) for each path, B x width.
std::vector<double> oracle_coefficients(const PathBatch& paths, const WordSet& ws);

}  // namespace sigkit::testkit
