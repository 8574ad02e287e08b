#include "memlane/parallel.hpp"

#include <chrono>
#include <stdexcept>
#include <thread>
#include <vector>

namespace memlane {

double timed_parallel(unsigned threads, const std::function<void(unsigned)>& body) {
  if (threads == 0) throw std::invalid_argument("timed_parallel: threads must be >= 1");
  using clock = std::chrono::steady_clock;

  const auto t0 = clock::now();
  if (threads == 1) {
    body(0);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned tid = 0; tid < threads; ++tid) workers.emplace_back(body, tid);
    for (auto& w : workers) w.join();
  }
  const auto t1 = clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace memlane
