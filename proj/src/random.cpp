#include "betamix/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace betamix {

std::vector<double> random_log_concave_weights(int order, Rng& rng, bool allow_zero_ends)
{
    const int n = order + 1;
    std::vector<double> logs(n);
    double level = rng.uniform(-2.0, 2.0);
    double slope = rng.uniform(-3.0, 3.0);
    const double max_step = 6.0 / std::max(order, 1);
    for (int i = 0; i < n; ++i) {
        logs[i] = level;
        level += slope;
        slope -= rng.uniform(0.0, max_step);
    }
    std::vector<double> weights(n);
    for (int i = 0; i < n; ++i)
        weights[i] = std::exp(logs[i]);

    if (allow_zero_ends && n > 1) {
        int first = 0;
        int last = n - 1;
        if (rng.uniform() < 0.25)
            first = static_cast<int>(rng.integer(0, n - 1));
        if (rng.uniform() < 0.25)
            last = static_cast<int>(rng.integer(first, n - 1));
        for (int i = 0; i < n; ++i)
            if (i < first || i > last)
                weights[i] = 0.0;
    }
    return weights;
}

ContinuousMixture random_log_concave_continuous(double order, int segments, Rng& rng, bool allow_zero_ends)
{
    segments = std::max(segments, 1);
    std::vector<double> knots{0.0, order};
    const double min_gap = order / (8.0 * segments);
    while (static_cast<int>(knots.size()) < segments + 1) {
        const double candidate = rng.uniform(0.0, order);
        const bool clear = std::all_of(knots.begin(), knots.end(),
                                       [&](double k) { return std::abs(k - candidate) >= min_gap; });
        if (clear)
            knots.push_back(candidate);
    }
    std::sort(knots.begin(), knots.end());

    std::vector<double> log_alpha(knots.size());
    double level = rng.uniform(-2.0, 2.0);
    double slope = rng.uniform(-3.0, 3.0);
    const double max_step = 6.0 / order;
    log_alpha[0] = level;
    for (std::size_t j = 1; j < knots.size(); ++j) {
        const double width = knots[j] - knots[j - 1];
        level += slope * width;
        log_alpha[j] = level;
        slope -= rng.uniform(0.0, max_step) * width;
    }

    if (allow_zero_ends && segments >= 3) {
        constexpr double neg_inf = -std::numeric_limits<double>::infinity();
        if (rng.uniform() < 0.25)
            log_alpha.front() = neg_inf;
        if (rng.uniform() < 0.25)
            log_alpha.back() = neg_inf;
    }
    return ContinuousMixture(order, std::move(knots), std::move(log_alpha));
}

} // namespace betamix
