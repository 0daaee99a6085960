#ifndef FHSF_PARALLEL_HPP
#define FHSF_PARALLEL_HPP

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace fhsf {

// Runs fn(worker, begin, end) over contiguous index chunks. Workers touch
// disjoint output ranges, so results are identical to a sequential run for
// any worker count.
inline void parallel_chunks(std::size_t count, int threads,
                            const std::function<void(int, std::size_t, std::size_t)>& fn) {
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (workers == 1 || count == 0) {
    fn(0, 0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t b = std::min(count, w * chunk);
    const std::size_t e = std::min(count, b + chunk);
    pool.emplace_back([&fn, w, b, e] { fn(w, b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace fhsf

#endif
