#ifndef LOGANHARM_THREADS_HPP
#define LOGANHARM_THREADS_HPP

namespace loganharm {

// worker count for parallel regions: OpenMP's default, optionally capped by
// the LOGANHARM_THREADS environment variable; 1 when built without OpenMP
int thread_cap();

} // namespace loganharm

#endif
