#pragma once

#include <cstddef>
#include <functional>

namespace shs {

/// Worker count for sampling loops; 0 means one per hardware thread.
struct Execution {
  unsigned threads = 1;
};

unsigned resolve_threads(unsigned requested);

/// Calls body(worker, begin, end) on contiguous chunks of [0, count). Chunk
/// boundaries depend only on count and the worker count; callers write
/// results by index so output never depends on scheduling. Exceptions from
/// workers are rethrown on the calling thread.
void parallel_for(std::size_t count, const Execution& exec,
                  const std::function<void(unsigned, std::size_t, std::size_t)>& body);

}  // namespace shs
