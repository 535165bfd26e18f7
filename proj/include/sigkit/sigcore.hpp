#pragma once

#include <span>
#include <vector>

#include "sigkit/path.hpp"
#include "sigkit/wordsets.hpp"

namespace sigkit {

/// Coefficient of the word in exp(increment): prod_r increment[w_r] / |w|!.
double segment_exp_coeff(std::span<const double> increment, std::span<const Letter> word);

/// One Chen update of the coefficient of `word` across a linear segment.
/// prev[k] is the coefficient of the length-k prefix before the segment
/// (prev[0] = 1), for k = 0..|word|. Returns the coefficient after it.
double horner_update(std::span<const double> prev, std::span<const double> increment,
                     std::span<const Letter> word);

/// Signature coefficients S_{0,T}(X, w) of each path's piecewise-linear
/// interpolation for every word of the set. A single-sample path yields the
/// identity (all non-ε coefficients 0).
///
/// Each (path, word) pair is an independent work unit carrying the |w|+1
/// prefix values of its word, so results do not depend on the thread count.
CoefficientBatch signature_forward(const PathBatch& paths, const WordSet& ws,
                                   const ComputeOptions& options = {});

/// Signatures over the sample windows [l_i, r_i], one batch per window, each
/// recomputed from the raw samples in the window.
std::vector<CoefficientBatch> signature_windows(const PathBatch& paths, const WordSet& ws,
                                                const WindowSpec& windows,
                                                const ComputeOptions& options = {});

/// Product in the truncated tensor algebra (the signature of the
/// concatenated path). Both inputs must share one fully truncated word set.
CoefficientBatch chen_concat(const CoefficientBatch& a, const CoefficientBatch& b);

/// Inverse in the truncated tensor algebra; for a signature this is the
/// signature of the time-reversed path.
CoefficientBatch signature_inverse(const CoefficientBatch& a);

}  // namespace sigkit
