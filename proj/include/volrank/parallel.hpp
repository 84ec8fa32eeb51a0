#pragma once

#include <cstddef>
#include <functional>

namespace volrank {

/// Worker cap from VOLRANK_THREADS; 1 (serial) when unset or unparsable.
std::size_t thread_budget();

/// Runs fn(0) .. fn(n-1) on up to `threads` workers. Tasks must write only
/// to their own output slot. If tasks throw, the exception of the lowest
/// failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace volrank
