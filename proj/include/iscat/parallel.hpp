#pragma once

#include <functional>

namespace iscat {

// Limits worker threads for all parallel loops; 0 restores the default.
void set_threads(int n);
int max_threads();
// Reads ISCAT_THREADS if set, else falls back to `requested`.
int resolve_threads(int requested);

// f(i) for i in [0, n); each index must write only its own output slot.
void parallel_for(int n, const std::function<void(int)>& f);

}  // namespace iscat
