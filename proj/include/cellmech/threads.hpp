#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace cellmech {

// Global worker-count knob shared by matvec row partitioning and sweep drivers.
int thread_count();
void set_thread_count(int n);

// Run kernel(r0, r1) over a static partition of [0, rows). Each row is produced
// by exactly one worker with a fixed sequential inner loop, so results do not
// depend on the thread count.
template <class Kernel>
void parallel_rows(int rows, Kernel&& kernel) {
  int nt = thread_count();
  if (nt <= 1 || rows < 4096) {
    kernel(0, rows);
    return;
  }
  nt = std::min<int>(nt, std::max(1, rows / 1024));
  std::vector<std::thread> pool;
  pool.reserve(nt);
  int chunk = (rows + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    int r0 = t * chunk, r1 = std::min(rows, r0 + chunk);
    if (r0 >= r1) break;
    pool.emplace_back([&kernel, r0, r1] { kernel(r0, r1); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace cellmech
