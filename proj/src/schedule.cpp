#include "memlane/schedule.hpp"

#include <algorithm>
#include <stdexcept>

namespace memlane {

std::string Schedule::to_string() const {
  return chunked() ? "static:" + std::to_string(chunk) : "static";
}

Schedule Schedule::parse(const std::string& text) {
  if (text == "static") return {};
  for (char sep : {',', ':'}) {
    auto pos = text.find(sep);
    if (pos != std::string::npos && text.substr(0, pos) == "static") {
      std::size_t chunk = std::stoull(text.substr(pos + 1));
      if (chunk == 0) throw std::invalid_argument("schedule: chunk must be positive");
      return {chunk};
    }
  }
  throw std::invalid_argument("schedule: expected 'static' or 'static,<chunk>', got '" + text + "'");
}

std::vector<IndexRange> ranges_for(std::size_t n, unsigned threads, unsigned tid,
                                   const Schedule& schedule) {
  if (threads == 0) throw std::invalid_argument("ranges_for: threads must be >= 1");
  if (tid >= threads) throw std::invalid_argument("ranges_for: tid out of range");
  std::vector<IndexRange> out;
  if (n == 0) return out;

  if (!schedule.chunked()) {
    std::size_t base = n / threads, extra = n % threads;
    std::size_t begin = tid * base + std::min<std::size_t>(tid, extra);
    std::size_t len = base + (tid < extra ? 1 : 0);
    if (len > 0) out.push_back({begin, begin + len});
    return out;
  }

  const std::size_t c = schedule.chunk;
  for (std::size_t start = static_cast<std::size_t>(tid) * c; start < n;
       start += static_cast<std::size_t>(threads) * c)
    out.push_back({start, std::min(start + c, n)});
  return out;
}

std::size_t iterations_for(std::size_t n, unsigned threads, unsigned tid, const Schedule& schedule) {
  std::size_t total = 0;
  for (const auto& r : ranges_for(n, threads, tid, schedule)) total += r.size();
  return total;
}

}  // namespace memlane
