#pragma once

#include <cstddef>
#include <functional>

namespace swing::mc {

/// Runs body(begin, end) over [0, n) split into contiguous blocks on up to
/// `threads` workers (0 = hardware concurrency). Each index is visited once;
/// callers write per-index results so output never depends on scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body);

int resolve_threads(int threads);

} // namespace swing::mc
