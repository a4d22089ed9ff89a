#pragma once

#include <cstddef>
#include <functional>

namespace collabnet {

/// Worker count used by parallel kernels. 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Iterations must write disjoint outputs;
/// callers reduce afterwards in index order so results do not depend on
/// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace collabnet
