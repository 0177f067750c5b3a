#pragma once

#include <cstddef>
#include <functional>

namespace rotchaos {

// Worker count from CHAOS_CERT_THREADS, else the hardware concurrency.
std::size_t worker_count();

// Calls fn(i) for i in [0, n) on up to worker_count() threads. fn must not
// throw.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace rotchaos
