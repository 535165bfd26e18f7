#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sigkit/backward.hpp"
#include "sigkit/path.hpp"
#include "sigkit/wordsets.hpp"

namespace sigkit {

/// Log-signature coefficients at Lyndon words, in the expanded tensor basis
/// (no conversion to bracket coordinates).
using LogCoefficientBatch = CoefficientBatch;

/// Tensor logarithm of every row of a batch over a fully truncated word set,
/// evaluated as the finite log series truncated at the set's depth.
CoefficientBatch tensor_log(const CoefficientBatch& signature);

/// Words the log-signature forward pass needs: every word of length < depth
/// plus the Lyndon words of length depth.
WordSet logsignature_support(std::uint32_t d, std::uint32_t depth);

/// Log-signature of each path at the Lyndon words of length <= depth. Only
/// the Lyndon words of the top level are computed there, since the top level
/// of the log depends on top-level signature values through its linear term
/// alone.
LogCoefficientBatch logsignature_forward(const PathBatch& paths, std::uint32_t depth,
                                         const ComputeOptions& options = {});

/// Sample gradients of sum_w grad_out[b][w] * logsig(X_b)[w], with grad_out
/// row-major B x |Lyndon words <= depth|.
std::vector<double> logsignature_backward(const PathBatch& paths, std::uint32_t depth,
                                          std::span<const double> grad_out,
                                          const BackwardOptions& options = {});

}  // namespace sigkit
