#include "pvdist/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace pvdist {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_)
        w = splitmix64(sm);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0)
        s_[0] = 0x9E3779B97F4A7C15ULL;
}

RngStream RngStream::substream(std::uint64_t root, std::uint64_t index) {
    std::uint64_t sm = root;
    const std::uint64_t a = splitmix64(sm);
    std::uint64_t mix = a ^ (index * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL);
    return RngStream(splitmix64(mix) ^ splitmix64(sm));
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) {
    return a + (b - a) * uniform01();
}

double RngStream::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0)
        u1 = uniform01();
    const double u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
}

long RngStream::poisson(double mean) {
    if (mean < 0.0)
        throw std::invalid_argument("poisson: mean must be >= 0");
    if (mean == 0.0)
        return 0;
    const double u = uniform01();
    const long mode = static_cast<long>(std::floor(mean));
    // pmf at the mode computed in log space to stay finite for large means.
    const double log_pm = mode * std::log(mean) - mean - std::lgamma(mode + 1.0);
    const double pm = std::exp(log_pm);
    double acc = pm;
    if (u < acc)
        return mode;
    // Walk outward from the mode, alternating down/up; each integer's mass is
    // counted exactly once, so this is exact CDF inversion in a custom order.
    long down_k = mode;
    double down_p = pm;
    long up_k = mode;
    double up_p = pm;
    const long hard_cap = mode + 64 + static_cast<long>(64.0 * std::sqrt(mean + 1.0));
    while (true) {
        if (down_k > 0) {
            down_p *= static_cast<double>(down_k) / mean;
            --down_k;
            acc += down_p;
            if (u < acc)
                return down_k;
        }
        ++up_k;
        up_p *= mean / static_cast<double>(up_k);
        acc += up_p;
        if (u < acc || up_k >= hard_cap)
            return up_k;
    }
}

std::vector<double> RngStream::sphere_direction(int d) {
    if (d < 1)
        throw std::invalid_argument("sphere_direction: dimension must be >= 1");
    if (d == 1)
        return {uniform01() < 0.5 ? -1.0 : 1.0};
    std::vector<double> v(static_cast<std::size_t>(d));
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto& c : v) {
            c = gaussian();
            norm2 += c * c;
        }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : v)
        c *= inv;
    return v;
}

std::vector<double> RngStream::uniform_in_ball(int d, double radius) {
    if (!(radius >= 0.0))
        throw std::invalid_argument("uniform_in_ball: radius must be >= 0");
    std::vector<double> v = sphere_direction(d);
    const double r = radius * std::pow(uniform01(), 1.0 / d);
    for (auto& c : v)
        c *= r;
    return v;
}

int default_workers() {
    const char* env = std::getenv("PVDIST_WORKERS");
    if (env != nullptr) {
        try {
            const int w = std::stoi(env);
            if (w >= 1)
                return w;
        } catch (const std::exception&) {
            // Fall through to the default below.
        }
    }
    return 1;
}

void parallel_for(long n, const std::function<void(long)>& fn, int workers) {
    if (n <= 0)
        return;
    if (workers <= 0)
        workers = default_workers();
    if (workers == 1 || n == 1) {
        for (long i = 0; i < n; ++i)
            fn(i);
        return;
    }
    // Fixed chunk size independent of the worker count keeps any
    // order-sensitive caller logic reproducible.
    const long chunk = 64;
    const long num_chunks = (n + chunk - 1) / chunk;
    std::atomic<long> next_chunk{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&]() {
        while (true) {
            const long c = next_chunk.fetch_add(1);
            if (c >= num_chunks)
                return;
            const long lo = c * chunk;
            const long hi = std::min(n, lo + chunk);
            try {
                for (long i = lo; i < hi; ++i)
                    fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next_chunk.store(num_chunks);  // stop handing out work
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int nthreads = static_cast<int>(std::min<long>(workers, num_chunks));
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back(work);
    for (auto& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

}  // namespace pvdist
