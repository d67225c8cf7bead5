#include "mixdist/parallel.hpp"

#include <atomic>

namespace mixdist {

namespace {
std::atomic<unsigned> g_max_threads{0};
}

void set_max_threads(unsigned count) { g_max_threads = count; }

unsigned max_threads()
{
    const unsigned configured = g_max_threads.load();
    if (configured != 0)
        return configured;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

bool& detail::inside_worker()
{
    thread_local bool flag = false;
    return flag;
}

} // namespace mixdist
