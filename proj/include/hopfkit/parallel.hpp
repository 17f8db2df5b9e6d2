#pragma once

#include <cstddef>
#include <functional>

namespace hopfkit {

// Worker count from HOPFKIT_THREADS, default 1.
unsigned thread_count();

// Runs body(i) for i in [0, n); each index is visited exactly once.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hopfkit
