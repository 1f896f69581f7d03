#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace rmtlab {

/// Evaluate `fn(i)` for i in [0, count) on up to `workers` threads and return
/// the results in index order. Work is handed out through an atomic counter,
/// so the assignment of indices to threads varies between runs but the output
/// never does. If any call throws, the exception from the lowest failing
/// index is rethrown after all workers have joined.
template <class Fn>
auto parallel_map(std::size_t count, int workers, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
    using Result = decltype(fn(std::size_t{}));
    std::vector<std::optional<Result>> slots(count);
    std::vector<std::exception_ptr> errors(count);

    const auto nthreads = static_cast<std::size_t>(
        std::clamp<long long>(workers, 1, static_cast<long long>(std::max<std::size_t>(count, 1))));
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(nthreads);
        for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    }

    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<Result> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace rmtlab
