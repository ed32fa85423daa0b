#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vander {

/// Worker count: VANDERSPEC_WORKERS if set, else the hardware concurrency.
inline int default_workers() {
    if (const char* env = std::getenv("VANDERSPEC_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

/// Runs fn(trial) for trial = 0..trials-1 on a shared work queue and returns
/// the results in trial order. Trials must be independent (each reseeds from
/// its own index), so the output is identical for any worker count.
template <class T, class Fn>
std::vector<T> run_trials(int trials, int workers, Fn&& fn) {
    std::vector<T> results(trials);
    if (workers <= 1 || trials <= 1) {
        for (int t = 0; t < trials; ++t) results[t] = fn(t);
        return results;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (true) {
            const int t = next.fetch_add(1);
            if (t >= trials) return;
            try {
                results[t] = fn(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = std::min(workers, trials);
    pool.reserve(count);
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return results;
}

} // namespace vander
