#include "qsc/util.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace qsc::detail {

unsigned sweep_threads() {
    const char* env = std::getenv("QSC_THREADS");
    if (!env) return 1;
    const long n = std::strtol(env, nullptr, 10);
    if (n < 1) return 1;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<unsigned>(std::min<long>(n, hw > 0 ? hw : 8));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = sweep_threads();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace qsc::detail
