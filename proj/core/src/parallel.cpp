#include "ptbench/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace ptbench {

int worker_count() {
    if (const char* env = std::getenv("PTBENCH_THREADS")) {
        try {
            const int requested = std::stoi(env);
            return std::clamp(requested, 1, 256);
        } catch (...) {
            // fall through to hardware detection on unparsable values
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& chunk) {
    if (n == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
    if (workers <= 1) {
        chunk(0, n);
        return;
    }
    const std::size_t base = n / workers;
    const std::size_t extra = n % workers;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    std::size_t begin = 0;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t len = base + (w < extra ? 1 : 0);
        const std::size_t end = begin + len;
        pool.emplace_back([&chunk, &errors, w, begin, end] {
            try {
                chunk(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace ptbench
