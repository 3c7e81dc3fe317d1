#include "gpnorm/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace gpnorm {

namespace {
std::atomic<std::size_t> g_threads{0};
}

void set_thread_count(std::size_t k) { g_threads.store(k); }

std::size_t thread_count() {
    if (std::size_t k = g_threads.load(); k > 0) return k;
    if (const char* env = std::getenv("GPNORM_THREADS")) {
        try {
            long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (...) {
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

}  // namespace gpnorm
