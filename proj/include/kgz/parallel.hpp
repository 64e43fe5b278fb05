#pragma once

// Static-chunk parallel loop; results never depend on the thread count since
// every index is computed independently.

#include <cstddef>
#include <functional>

namespace kgz {

void set_threads(int n);
int threads();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace kgz
