#include "declutter/parallel.hpp"

#include <atomic>

namespace declutter {

namespace {
std::atomic<std::size_t> configured_limit{0};
}

void set_thread_limit(std::size_t limit) {
    configured_limit.store(limit);
}

std::size_t thread_limit() {
    const std::size_t limit = configured_limit.load();
    if (limit != 0) {
        return limit;
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

}
