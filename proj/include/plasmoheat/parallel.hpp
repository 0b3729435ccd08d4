#pragma once

#include <functional>

namespace plasmoheat {

// Worker count: PLASMOHEAT_THREADS if set (>= 1), else hardware concurrency.
int worker_count();

// fn(i) for i in [begin, end), split in contiguous chunks across workers.
// Runs serially when the range is small or a single worker is configured.
// Exceptions from workers are rethrown on the calling thread.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace plasmoheat
