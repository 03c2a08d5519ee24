#include "scalecalc/parallel.hpp"

#include <atomic>

namespace scalecalc {

namespace {
std::atomic<unsigned> g_threads{1};
}

void set_worker_threads(unsigned n) { g_threads.store(n == 0 ? 1 : n); }

unsigned worker_threads() { return g_threads.load(); }

}  // namespace scalecalc
