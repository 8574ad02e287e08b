#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace memlane {

/// Static loop schedule. chunk == 0 assigns one balanced contiguous block per
/// worker (the first n % t workers get one extra iteration); chunk > 0 deals
/// chunk-sized blocks round-robin.
struct Schedule {
  std::size_t chunk = 0;

  bool chunked() const { return chunk > 0; }
  std::string to_string() const;
  /// Accepts "static", "static,C" and "static:C".
  static Schedule parse(const std::string& text);
};

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

/// Ascending, disjoint ranges of [0, n) owned by worker `tid` of `threads`.
std::vector<IndexRange> ranges_for(std::size_t n, unsigned threads, unsigned tid,
                                   const Schedule& schedule);

/// Iterations assigned to worker `tid` (sum of its range sizes).
std::size_t iterations_for(std::size_t n, unsigned threads, unsigned tid, const Schedule& schedule);

}  // namespace memlane
