#pragma once

#include <algorithm>
#include <cstddef>

#include <tbb/blocked_range.h>
#include <tbb/info.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

namespace metafib::detail {

/// Calls `body(chunk)` for every chunk in [0, chunks) on at most `jobs`
/// worker threads.  Callers write results into per-chunk slots so the merge
/// order never depends on scheduling.
template <typename Body>
void for_each_chunk(std::size_t chunks, int jobs, Body&& body) {
  // More threads than cores only earns a warning from TBB.
  jobs = std::min(jobs, std::max(1, tbb::info::default_concurrency()));
  if (jobs <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  tbb::task_arena arena(jobs);
  arena.execute([&] {
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, chunks, 1),
                      [&](const tbb::blocked_range<std::size_t>& range) {
                        for (std::size_t c = range.begin(); c != range.end(); ++c) body(c);
                      });
  });
}

}  // namespace metafib::detail
