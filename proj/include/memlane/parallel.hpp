#pragma once

#include <functional>

namespace memlane {

/// Run body(tid) on `threads` workers and return the launch-to-join wall
/// time in seconds. Workers must write disjoint data; no other
/// synchronization is provided.
double timed_parallel(unsigned threads, const std::function<void(unsigned)>& body);

}  // namespace memlane
