#pragma once

#include <cstddef>
#include <functional>

namespace pgml {

/// Worker count: PGML_THREADS if set and positive, otherwise hardware concurrency.
std::size_t default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index
/// must write only its own output slot. If any call throws, the exception
/// from the lowest failing index is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace pgml
