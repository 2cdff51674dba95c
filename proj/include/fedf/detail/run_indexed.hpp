#ifndef FEDF_DETAIL_RUN_INDEXED_HPP
#define FEDF_DETAIL_RUN_INDEXED_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace fedf {

template <typename T>
std::vector<T> run_indexed(std::uint64_t count, unsigned jobs,
                           const std::function<T(std::uint64_t)>& fn)
{
    std::vector<std::optional<T>> slots(count);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };

    const unsigned threads = static_cast<unsigned>(
        std::max<std::uint64_t>(1, std::min<std::uint64_t>(jobs == 0 ? 1 : jobs, count)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<T> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace fedf

#endif  // FEDF_DETAIL_RUN_INDEXED_HPP
