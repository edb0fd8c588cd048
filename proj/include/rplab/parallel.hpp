#ifndef RPLAB_PARALLEL_HPP
#define RPLAB_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rplab
{

///
/// Run f(i) for i in [0, n) on up to `threads` workers. Work items are handed
/// out dynamically, so f must write only to per-index storage; results are then
/// independent of the thread count. The first exception is rethrown.
///
template <class F>
void parallel_for(std::size_t n, int threads, F&& f)
{
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || n <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            f(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
            {
                return;
            }
            try
            {
                f(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                {
                    error = std::current_exception();
                }
                next = n;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < std::min(workers, n); ++t)
    {
        pool.emplace_back(body);
    }
    body();
    for (auto& t : pool)
    {
        t.join();
    }
    if (error)
    {
        std::rethrow_exception(error);
    }
}

} // namespace rplab

#endif // RPLAB_PARALLEL_HPP
