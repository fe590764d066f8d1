#pragma once

#include <cstddef>
#include <functional>

namespace eqp {

/// Runs body(i) for i in [0, count) on up to `workers` threads, each thread
/// taking one contiguous block. Every index is processed exactly once, so
/// results written per index do not depend on the worker count.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace eqp
