#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace dnet::detail {

// Calls fn(k) for every composition of total into `parts` entries in [0, cap],
// in lexicographic order. Stops early when fn returns false; returns false then.
inline bool for_each_composition(int parts, int total, int cap, const std::function<bool(const std::vector<int>&)>& fn) {
    if (parts <= 0 || total < 0 || static_cast<long long>(cap) * parts < total) return true;
    std::vector<int> k(static_cast<std::size_t>(parts), 0);
    std::function<bool(int, int)> rec = [&](int pos, int left) -> bool {
        if (pos == parts - 1) {
            k[static_cast<std::size_t>(pos)] = left;
            return fn(k);
        }
        const int rest_cap = cap * (parts - pos - 1);
        for (int v = std::max(0, left - rest_cap); v <= std::min(cap, left); ++v) {
            k[static_cast<std::size_t>(pos)] = v;
            if (!rec(pos + 1, left - v)) return false;
        }
        return true;
    };
    return rec(0, total);
}

// Number of vectors in [0, cap]^parts with sum <= total.
inline std::uint64_t count_bounded_vectors(int parts, int total, int cap) {
    // ways[t] = number of vectors so far with sum t
    std::vector<std::uint64_t> ways(static_cast<std::size_t>(total) + 1, 0);
    ways[0] = 1;
    for (int p = 0; p < parts; ++p) {
        std::vector<std::uint64_t> next(ways.size(), 0);
        for (int t = 0; t <= total; ++t) {
            if (ways[static_cast<std::size_t>(t)] == 0) continue;
            for (int v = 0; v <= cap && t + v <= total; ++v) {
                auto& slot = next[static_cast<std::size_t>(t + v)];
                const auto add = ways[static_cast<std::size_t>(t)];
                slot = (slot > UINT64_MAX - add) ? UINT64_MAX : slot + add;
            }
        }
        ways = std::move(next);
    }
    std::uint64_t sum = 0;
    for (auto w : ways) sum = (sum > UINT64_MAX - w) ? UINT64_MAX : sum + w;
    return sum;
}

inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware).
// Work is handed out through a shared counter; results must be written to
// per-index slots so the merged output does not depend on the schedule.
inline void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = count;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace dnet::detail
