#pragma once

#include <functional>

namespace weylscat {

/// Process-wide worker count used by parallel_for. Values below 1 mean 1.
void set_thread_count(int n);
int thread_count();

/// Runs fn(i) for i in [begin, end) on contiguous static chunks. Each index is
/// visited exactly once, so results do not depend on the worker count.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace weylscat
