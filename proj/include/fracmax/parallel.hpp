#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace fracmax {

// Worker count used by every parallel scan. Defaults to FRACMAX_THREADS
// when set, otherwise std::thread::hardware_concurrency().
std::size_t thread_count();
void set_thread_count(std::size_t n);

// Calls body(i) for i in [0, n), split into contiguous blocks, one per
// worker. Results must be written to per-index slots; nothing here orders
// side effects.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fracmax
