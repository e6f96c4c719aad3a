#include "surplusect/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace surplusect {

void set_thread_count(int threads) {
  omp_set_num_threads(threads >= 1 ? threads : omp_get_num_procs());
}

int thread_count() { return omp_get_max_threads(); }

int thread_count_from_env() {
  const char* value = std::getenv("SURPLUSECT_THREADS");
  if (!value || !*value) return 0;
  try {
    std::size_t used = 0;
    const int threads = std::stoi(value, &used);
    return used == std::string(value).size() && threads > 0 ? threads : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace surplusect
