#pragma once

#include "sigkit/path.hpp"

namespace sigkit {

/// Lead-lag embedding: 2d channels (lag block, then lead block) and 2M+1
/// points, X̂_{2k} = (X_k, X_k) and X̂_{2k+1} = (X_k, X_{k+1}).
PathBatch lead_lag(const PathBatch& paths);

/// Reverses the sample order of every path.
PathBatch time_reverse(const PathBatch& paths);

}  // namespace sigkit
