#include "backstep/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace backstep {

namespace {

std::atomic<int> override_threads{0};

int env_threads() {
    static const int n = [] {
        const char* v = std::getenv("BACKSTEP_THREADS");
        if (!v || !*v) return 0;
        try {
            int k = std::stoi(v);
            return k > 0 ? k : 0;
        } catch (const std::exception&) {
            return 0;
        }
    }();
    return n;
}

}  // namespace

int thread_count() {
    if (int o = override_threads.load(); o > 0) return o;
    if (int e = env_threads(); e > 0) return e;
    return omp_get_max_threads();
}

void set_thread_count(int n) { override_threads.store(n > 0 ? n : 0); }

}  // namespace backstep
