// Deterministic parallel map: cells are pure, results land in a preallocated
// slot per index, so the output is identical for any worker count.
#ifndef MAUTNER_PARALLEL_HPP
#define MAUTNER_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace mautner {

template <typename F>
void parallel_for(std::size_t count, int workers, F&& body) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    const int spawn = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    pool.reserve(spawn);
    for (int w = 0; w < spawn; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
}

} // namespace mautner

#endif
