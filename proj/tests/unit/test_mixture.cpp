#include "doctest.h"

#include "betamix/mixture.hpp"
#include "betamix/random.hpp"
#include "betamix/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

using namespace betamix;

namespace {

// Midpoint sums on each knot segment, so the cells never straddle a kink.
double riemann_continuous(const ContinuousMixture& mix, double x, int cells_per_segment)
{
    const double m = mix.order();
    const auto knots = mix.knots();
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
        const double h = (knots[j + 1] - knots[j]) / cells_per_segment;
        for (int k = 0; k < cells_per_segment; ++k) {
            const double s = knots[j] + (k + 0.5) * h;
            const double la = mix.log_alpha_at(s);
            if (std::isinf(la))
                continue;
            const double binom = std::tgamma(m + 1.0) / (std::tgamma(s + 1.0) * std::tgamma(m - s + 1.0));
            sum += h * std::exp(la) * binom * std::pow(1.0 - x, s) * std::pow(x, m - s);
        }
    }
    return sum;
}

} // namespace

TEST_CASE("discrete density examples")
{
    CHECK(eval_density_discrete(DiscreteMixture({1, 1, 1}), 0.37) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eval_density_discrete(DiscreteMixture({1, 2, 4}), 0.5) == doctest::Approx(2.25).epsilon(1e-14));
    CHECK(eval_density_discrete(DiscreteMixture({0, 1, 0}), 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    const DiscreteMixture geo({1, 2, 4});
    for (double x : {0.0, 0.1, 0.5, 0.9, 1.0})
        CHECK(eval_density_discrete(geo, x) == doctest::Approx((2 - x) * (2 - x)).epsilon(1e-14));
}

TEST_CASE("discrete mixture validation")
{
    CHECK_THROWS_AS(DiscreteMixture(std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteMixture({1.0, -0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteMixture(3, {1.0, 1.0}), std::invalid_argument);
    CHECK(DiscreteMixture({0.0, 0.0}).is_zero());
}

TEST_CASE("reversal mirrors the density")
{
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const DiscreteMixture mix(random_log_concave_weights(static_cast<int>(rng.integer(1, 30)), rng));
        const DiscreteMixture rev = mix.reversed();
        const double x = rng.uniform();
        CHECK(eval_density_discrete(rev, x) == doctest::Approx(eval_density_discrete(mix, 1 - x)).epsilon(1e-12));
    }
}

TEST_CASE("discrete derivatives")
{
    const EvalResult flat = eval_derivs_discrete(DiscreteMixture({1, 1, 1}), 0.3);
    CHECK(std::abs(flat.d1) <= 1e-14);
    CHECK(std::abs(flat.d2) <= 1e-14);

    const DiscreteMixture geo({1, 2, 4});
    for (double x : {0.1, 0.4, 0.8}) {
        const EvalResult r = eval_derivs_discrete(geo, x);
        CHECK(r.value * r.d2 == doctest::Approx(0.5 * r.d1 * r.d1).epsilon(1e-12));
    }

    const DiscreteMixture mix({1, 5, 2, 1});
    const double x = 0.3, h = 1e-5;
    const EvalResult r = eval_derivs_discrete(mix, x);
    const double fp = eval_density_discrete(mix, x + h), fm = eval_density_discrete(mix, x - h);
    const double f0 = eval_density_discrete(mix, x);
    CHECK(r.d1 == doctest::Approx((fp - fm) / (2 * h)).epsilon(1e-8));
    CHECK(r.d2 == doctest::Approx((fp - 2 * f0 + fm) / (h * h)).epsilon(1e-4));
    CHECK(r.log_d1 == doctest::Approx(r.d1 / r.value).epsilon(1e-12));
}

TEST_CASE("continuous density against a Riemann oracle")
{
    const ContinuousMixture flat = ContinuousMixture::constant(2.0);
    const double want = riemann_continuous(flat, 0.5, 1000000);
    CHECK(eval_density_continuous(flat, 0.5) == doctest::Approx(want).epsilon(1e-9));

    Rng rng(8);
    for (int t = 0; t < 5; ++t) {
        const ContinuousMixture mix = random_log_concave_continuous(rng.uniform(1.5, 12.0), 5, rng);
        const double x = rng.uniform(0.1, 0.9);
        CHECK(eval_density_continuous(mix, x) == doctest::Approx(riemann_continuous(mix, x, 100000)).epsilon(1e-7));
    }
}

TEST_CASE("all -inf mixing function is zero")
{
    const double ninf = -std::numeric_limits<double>::infinity();
    const ContinuousMixture mix(3.0, {0.0, 1.5, 3.0}, {ninf, ninf, ninf});
    CHECK(mix.is_zero());
    CHECK(eval_density_continuous(mix, 0.4) == 0.0);
}

TEST_CASE("narrow mixing function approaches a single component")
{
    const double ninf = -std::numeric_limits<double>::infinity();
    const double x = 0.35;
    const double target = 2.0 * (1 - x) * x;
    double previous = std::numeric_limits<double>::infinity();
    for (double width : {0.2, 0.05, 0.0125}) {
        // alpha = 1/width on [1 - width/2, 1 + width/2], unit mass
        const ContinuousMixture mix(2.0, {0.0, 1.0 - width / 2, 1.0 + width / 2, 2.0},
                                    {ninf, -std::log(width), -std::log(width), ninf});
        const double err = std::abs(eval_density_continuous(mix, x) - target);
        CHECK(err < previous);
        previous = err;
    }
    CHECK(previous < 1e-3);
}

TEST_CASE("discrete and continuous agree as the mixing function concentrates")
{
    const double ninf = -std::numeric_limits<double>::infinity();
    const std::vector<double> w = {1.0, 3.0, 2.0};
    const double x = 0.6;
    const double target = eval_density_discrete(DiscreteMixture(w), x);
    double previous = std::numeric_limits<double>::infinity();
    for (double width : {0.4, 0.1, 0.025}) {
        // mass w_i spread evenly over the part of [i - width/2, i + width/2] inside [0, 2]
        const double h = width / 2;
        const ContinuousMixture mix(2.0, {0.0, h, 0.5, 1 - h, 1 + h, 1.5, 2 - h, 2.0},
                                    {std::log(w[0] / h), std::log(w[0] / h), ninf, std::log(w[1] / width),
                                     std::log(w[1] / width), ninf, std::log(w[2] / h), std::log(w[2] / h)});
        CHECK(mix.mass() == doctest::Approx(6.0).epsilon(1e-13));
        const double err = std::abs(eval_density_continuous(mix, x) - target);
        CHECK(err < previous);
        previous = err;
    }
    CHECK(previous < 1e-2 * target);
}

TEST_CASE("normalization")
{
    CHECK(normalization(DiscreteMixture({1, 1, 1})) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(normalization(DiscreteMixture({3, 0, 0})) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(normalization(DiscreteMixture({1, 2, 3, 2, 1})) == doctest::Approx(9.0 / 5.0).epsilon(1e-15));
    const DiscreteMixture mix({1, 2, 3, 2, 1});
    CHECK(cdf(mix, 1.0) == doctest::Approx(9.0 / 5.0).epsilon(1e-13));

    Rng rng(5);
    const ContinuousMixture cont = random_log_concave_continuous(6.5, 4, rng);
    CHECK(cdf(cont, 1.0) == doctest::Approx(normalization(cont)).epsilon(1e-9));
}

TEST_CASE("cdf")
{
    const DiscreteMixture flat({1, 1, 1});
    CHECK(cdf(flat, 0.0) == 0.0);
    CHECK(cdf(flat, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
    const std::vector<double> table = tabulate_cdf(flat, 10);
    REQUIRE(table.size() == 11);
    for (int k = 0; k <= 10; ++k)
        CHECK(table[k] == doctest::Approx(k / 10.0).epsilon(1e-13));
}

TEST_CASE("sampler")
{
    const DiscreteMixture flat({1, 1, 1});
    std::vector<double> draws = sample(flat, 100000, 42);
    CHECK(draws == sample(flat, 100000, 42));
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    const double n = static_cast<double>(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i)
        ks = std::max({ks, std::abs((i + 1) / n - draws[i]), std::abs(draws[i] - i / n)});
    CHECK(ks <= 0.01);

    const std::vector<double> beta = sample(DiscreteMixture({0, 0, 1, 0, 0, 0}), 100000, 1);
    double mean = 0.0;
    for (double v : beta)
        mean += v;
    CHECK(mean / 100000.0 == doctest::Approx(4.0 / 7.0).epsilon(0.01 / (4.0 / 7.0)));
}

TEST_CASE("log-concavity of weights")
{
    CHECK(is_log_concave_weights(std::vector<double>{1, 2, 4}));
    CHECK(is_log_concave_weights(std::vector<double>{0, 1, 1, 0}));
    CHECK_FALSE(is_log_concave_weights(std::vector<double>{1, 0.01, 1}));
    CHECK_FALSE(is_log_concave_weights(std::vector<double>{1, 0, 1}));
    Rng rng(2);
    for (int t = 0; t < 50; ++t)
        CHECK(is_log_concave_weights(random_log_concave_weights(static_cast<int>(rng.integer(1, 40)), rng)));
}
