#include "skewprod/sde.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace skewprod {

WienerBundle wiener_increments(const Grid& grid, std::size_t dim, std::uint64_t key) {
    if (dim < 1) throw InvalidNumeric("dim", "must be at least 1");
    WienerBundle bundle;
    bundle.grid = grid;
    bundle.dim = dim;
    bundle.seed = key;
    bundle.increments.resize(grid.n_steps * dim);
    const double scale = std::sqrt(grid.dt);
    for (std::size_t c = 0; c < dim; ++c) {
        CounterRng rng(derive_key(key, c));
        for (std::size_t k = 0; k < grid.n_steps; ++k) {
            bundle.increments[k * dim + c] = scale * rng.next_normal();
        }
    }
    return bundle;
}

SamplePath<double> scalar_bm_path(const Grid& grid, std::uint64_t key) {
    const WienerBundle noise = wiener_increments(grid, 1, key);
    SamplePath<double> path;
    path.grid = grid;
    path.seed = key;
    path.values.resize(grid.n_steps + 1);
    path.values[0] = 0.0;
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        path.values[k + 1] = path.values[k] + noise.at(k, 0);
    }
    return path;
}

void parallel_for_paths(std::size_t n_paths, unsigned n_threads,
                        const std::function<void(std::size_t)>& fn) {
    if (n_threads <= 1 || n_paths <= 1) {
        for (std::size_t i = 0; i < n_paths; ++i) fn(i);
        return;
    }
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(n_threads, n_paths));
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_paths) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace skewprod
