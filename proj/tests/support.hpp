#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace test_support {

// Empirical pmf on {0, ..., size - 1} from `samples` draws.
inline std::vector<double> histogram(std::int64_t size, std::int64_t samples,
                                     const std::function<std::int64_t()>& draw) {
    std::vector<double> h(static_cast<std::size_t>(size), 0.0);
    for (std::int64_t i = 0; i < samples; ++i) h[static_cast<std::size_t>(draw())] += 1.0;
    for (double& v : h) v /= static_cast<double>(samples);
    return h;
}

inline double tv(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return 0.5 * sum;
}

// Binomial pmf by direct products; independent of the library's log-gamma route.
inline std::vector<double> binomial_by_recurrence(std::int64_t n, double q) {
    std::vector<double> pmf(static_cast<std::size_t>(n + 1), 0.0);
    double coeff = 1.0;
    for (std::int64_t k = 0; k <= n; ++k) {
        pmf[static_cast<std::size_t>(k)] = coeff * std::pow(q, static_cast<double>(k)) *
                                           std::pow(1.0 - q, static_cast<double>(n - k));
        coeff = coeff * static_cast<double>(n - k) / static_cast<double>(k + 1);
    }
    return pmf;
}

}  // namespace test_support
