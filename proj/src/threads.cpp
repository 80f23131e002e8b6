#include "loganharm/threads.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace loganharm {

int thread_cap() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("LOGANHARM_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
#else
    return 1;
#endif
}

} // namespace loganharm
