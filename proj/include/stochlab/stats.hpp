#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace stochlab {

struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

// Mean and standard error, accumulated in index order.
Estimate estimate(const std::vector<double>& xs);

// sup |F_n - F|
double ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf);
// Same statistic given F evaluated at the sorted sample.
double ks_from_sorted_cdf(const std::vector<double>& cdf_at_sorted);
// sup |F_n - G_m|
double ks_two_sample(std::vector<double> a, std::vector<double> b);
// Asymptotic Kolmogorov tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2)
double kolmogorov_q(double lambda);
// p-value for the two-sample statistic with effective size nm/(n+m)
double ks_two_sample_pvalue(double d, std::size_t n, std::size_t m);
// Critical value c(alpha) sqrt((n+m)/(nm)) of the two-sample test
double ks_two_sample_critical(double alpha, std::size_t n, std::size_t m);

// Quadrant statistic for bivariate samples: sup over a pooled-quantile grid of
// the largest difference in quadrant probabilities.
double ks_two_sample_2d(const std::vector<double>& ax, const std::vector<double>& ay,
                        const std::vector<double>& bx, const std::vector<double>& by, int grid = 128);

// Runs f(i) for i in [0, n) over a fixed number of workers. Results land at
// index i, so the output does not depend on the worker count.
template <class T, class F>
std::vector<T> map_indexed(std::size_t n, int workers, F&& f) {
    std::vector<T> out(n);
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = static_cast<std::size_t>(w); i < n; i += static_cast<std::size_t>(workers))
                out[i] = f(i);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

// Number of worker threads to use by default (the STOCHLAB_WORKERS variable, else 1).
int default_workers();

}  // namespace stochlab
