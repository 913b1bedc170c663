#include "hwcount/parallel.hpp"

#include <cstdlib>
#include <string>

namespace hwcount {

namespace {
std::atomic<int> g_cap{0};
}

int thread_cap() {
    const int set = g_cap.load();
    if (set >= 1) return set;
    if (const char* env = std::getenv("HW_COUNTS_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_thread_cap(int n) { g_cap.store(n >= 1 ? n : 0); }

}  // namespace hwcount
