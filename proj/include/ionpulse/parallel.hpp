#ifndef IONPULSE_PARALLEL_HPP
#define IONPULSE_PARALLEL_HPP

#include <functional>

namespace ionpulse::parallel {

// Process-wide switch between the OpenMP kernels and their serial reference
// path. Results are index-deterministic either way: workers write to
// per-index slots and reductions happen in index order afterwards.
bool enabled();
void set_enabled(bool on);

// Runs fn(i) for i in [0, count). With OpenMP available and enabled, the
// iterations are distributed across threads.
void for_index(int count, const std::function<void(int)>& fn);

} // namespace ionpulse::parallel

#endif
