#pragma once

namespace surplusect {

/// Sets the OpenMP thread count used by every parallel kernel. Values < 1
/// select all available cores.
void set_thread_count(int threads);

int thread_count();

/// Thread count from SURPLUSECT_THREADS, or 0 when unset or malformed.
int thread_count_from_env();

}  // namespace surplusect
