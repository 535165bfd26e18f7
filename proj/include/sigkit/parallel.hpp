#pragma once

namespace sigkit {

/// Process-wide worker cap used when ComputeOptions::threads is 0. A value of
/// 0 restores the OpenMP runtime default.
void set_default_threads(int threads);
int default_threads();

/// The worker count a call with the given request will use (always >= 1).
int resolve_threads(int requested);

}  // namespace sigkit
