#include "ionpulse/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace ionpulse::parallel {

namespace {
std::atomic<bool> g_enabled{[] {
    const char* env = std::getenv("IONPULSE_SERIAL");
    return env == nullptr || env[0] == '0';
}()};
}

bool enabled() { return g_enabled.load(std::memory_order_relaxed); }
void set_enabled(bool on) { g_enabled.store(on, std::memory_order_relaxed); }

void for_index(int count, const std::function<void(int)>& fn) {
#ifdef _OPENMP
    if (enabled()) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
#endif
    for (int i = 0; i < count; ++i) fn(i);
}

} // namespace ionpulse::parallel
