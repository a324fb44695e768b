#pragma once

#include <functional>

namespace gls {

int default_thread_count();

// Runs fn(i) once for each i in [0, n), split across threads; blocks until
// done. Work items must be independent. threads <= 1 runs inline.
void parallel_for(long n, int threads, const std::function<void(long)>& fn);

}  // namespace gls
