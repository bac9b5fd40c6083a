#pragma once

namespace backstep {

// Thread count for the OpenMP kernels: BACKSTEP_THREADS if set and positive,
// otherwise the OpenMP default. Read once.
int thread_count();

// Overrides the thread count (0 restores the environment/default value).
void set_thread_count(int n);

}  // namespace backstep
