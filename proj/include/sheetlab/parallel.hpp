#pragma once

#include <cstddef>
#include <functional>

namespace sheetlab {

// Hardware concurrency, or the SHEETLAB_THREADS environment variable when set.
std::size_t worker_count();

// Runs fn(i) for i in [0, n) over contiguous blocks. Each index is handled by
// exactly one worker, so results written per index do not depend on the thread
// count. The exception from the lowest failing block is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace sheetlab
