// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "betamix/certifier.hpp"
#include "betamix/lemma_lab.hpp"
#include "betamix/mixture.hpp"
#include "betamix/random.hpp"
#include "betamix/special_functions.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <string>
#include <vector>

using namespace betamix;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

int failures = 0;

void run(int id, const char* title, double budget_s, const std::function<Outcome()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = budget_s <= 0.0 || secs < budget_s;
    const bool ok = out.ok && in_time;
    if (!ok)
        ++failures;
    std::printf("criterion %2d: %s  %s (%s) [%.2fs%s]\n", id, ok ? "PASS" : "FAIL", title, out.detail.c_str(), secs,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Generalized binomial from std::tgamma, with 1/Gamma taken as 0 at poles.
double rgamma_std(double z)
{
    if (z <= 0.0 && z == std::floor(z))
        return 0.0;
    return 1.0 / std::tgamma(z);
}

double binom_std(double order, double s)
{
    return std::tgamma(order + 1.0) * rgamma_std(s + 1.0) * rgamma_std(order - s + 1.0);
}

struct Riemann {
    double lhs = 0.0;
    double rhs = 0.0;
};

Riemann riemann_sides(double order, double n, ContinuousInequality which, Interval set, int cells)
{
    Riemann r;
    const double h = (set.hi - set.lo) / cells;
    for (int k = 0; k < cells; ++k) {
        const double s = set.lo + (k + 0.5) * h;
        r.lhs += binom_std(order - 1.0, s) * binom_std(order - 1.0, n - s);
        if (which == ContinuousInequality::Ineq6)
            r.rhs += binom_std(order, s + 1.0) * binom_std(order - 2.0, n - s - 1.0);
        else
            r.rhs += binom_std(order, s) * binom_std(order - 2.0, n - s);
    }
    r.lhs *= h;
    r.rhs *= h;
    return r;
}

// g, g', g'' by direct power sums in long double.
struct Direct {
    long double g = 0, d1 = 0, d2 = 0;
};

Direct direct_discrete(const std::vector<double>& w, long double x)
{
    const int m = static_cast<int>(w.size()) - 1;
    Direct out;
    for (int i = 0; i <= m; ++i) {
        const long double c = w[i] * int_binom(m, i);
        const long double a = i, b = m - i;
        auto p = [](long double base, long double e) { return e == 0 ? 1.0L : std::pow(base, e); };
        const long double u = p(1 - x, a), v = p(x, b);
        const long double du = a == 0 ? 0 : -a * p(1 - x, a - 1);
        const long double dv = b == 0 ? 0 : b * p(x, b - 1);
        const long double ddu = a < 2 ? 0 : a * (a - 1) * p(1 - x, a - 2);
        const long double ddv = b < 2 ? 0 : b * (b - 1) * p(x, b - 2);
        out.g += c * u * v;
        out.d1 += c * (du * v + u * dv);
        out.d2 += c * (ddu * v + 2 * du * dv + u * ddv);
    }
    return out;
}

Outcome uniform_identity()
{
    double worst = 0.0;
    for (int m : {1, 2, 10, 50}) {
        const DiscreteMixture mix(std::vector<double>(m + 1, 1.0));
        for (int k = 0; k < 1024; ++k)
            worst = std::max(worst, std::abs(eval_density_discrete(mix, k / 1023.0) - 1.0));
    }
    return {worst <= 1e-12, fmt("max |g-1| = %.3g", worst)};
}

Outcome geometric_tightness()
{
    double worst = 0.0;
    for (int m : {2, 10, 100})
        for (double r : {0.5, 2.0, 5.0})
            worst = std::max(worst, sharpness_check(m, r));
    return {worst <= 1e-8, fmt("max |margin| = %.3g", worst)};
}

Outcome discrete_at_scale()
{
    Rng rng(20240101);
    int bad = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 100; ++t) {
        const int m = static_cast<int>(rng.integer(1, 64));
        const DiscreteMixture mix(random_log_concave_weights(m, rng));
        CertifyOptions opt;
        opt.seed = 1000 + t;
        const ConcavityCertificate c = certify(mix, opt);
        worst = std::min(worst, c.min_margin_eq10);
        if (c.verdict != Verdict::Certified || c.min_margin_eq10 < -1e-9 || c.midpoint_checks != 64
            || c.midpoint_failures != 0)
            ++bad;
    }
    return {bad == 0, "failures " + std::to_string(bad) + "/100, " + fmt("min margin %.3g", worst)};
}

Outcome necessity()
{
    const DiscreteMixture mix({1.0, 0.01, 1.0});
    const ConcavityCertificate c = certify(mix);
    const double g25 = eval_density_discrete(mix, 0.25);
    const double g50 = eval_density_discrete(mix, 0.5);
    const double g75 = eval_density_discrete(mix, 0.75);
    const bool values = std::abs(g25 - 0.62875) <= 1e-12 && std::abs(g75 - 0.62875) <= 1e-12
                        && std::abs(g50 - 0.505) <= 1e-12 && g25 * g75 > g50 * g50;
    const bool ok = c.verdict == Verdict::Violated && std::abs(c.worst_x - 0.5) <= 0.05 && c.witness.has_value()
                    && values;
    return {ok, "verdict " + to_string(c.verdict) + fmt(", worst_x %.4f", c.worst_x)
                    + fmt(", g(.25)g(.75) = %.6f", g25 * g75) + fmt(" vs g(.5)^2 = %.6f", g50 * g50)};
}

Outcome lemma2_discrete_sweep()
{
    const std::vector<DiscreteLemmaCase> cases = sweep_lemma2_discrete(12);
    // Pascal triangle oracle for the Vandermonde totals.
    std::vector<std::vector<BigInt>> pascal(23);
    for (int r = 0; r <= 22; ++r) {
        pascal[r].assign(r + 1, BigInt(1));
        for (int j = 1; j < r; ++j)
            pascal[r][j] = pascal[r - 1][j - 1] + pascal[r - 1][j];
    }
    int bad = 0, full = 0, full_bad = 0;
    for (const DiscreteLemmaCase& c : cases) {
        if (!c.holds())
            ++bad;
        if (c.k <= lemma2_discrete_full_range_k(c.order, c.n)) {
            ++full;
            const BigInt& want = pascal[2 * c.order - 2][c.n];
            if (c.lhs != want || c.rhs != want)
                ++full_bad;
        }
    }
    return {bad == 0 && full_bad == 0 && !cases.empty(),
            std::to_string(cases.size()) + " cases, " + std::to_string(bad) + " failures, "
                + std::to_string(full) + " full-range, " + std::to_string(full_bad) + " Vandermonde mismatches"};
}

Outcome lemma2_continuous_sweep()
{
    const std::vector<ContinuousLemmaCase> cases = sweep_lemma2_continuous(50, 7);
    int bad = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (const ContinuousLemmaCase& c : cases) {
        worst = std::min(worst, c.margin());
        if (!c.holds(1e-7))
            ++bad;
    }
    // Riemann oracle on 20 spot cases with nonempty sets.
    int spots = 0;
    double worst_rel = 0.0;
    for (std::size_t i = 0; i < cases.size() && spots < 20; i += 3) {
        const ContinuousLemmaCase& c = cases[i + (spots % 3)];
        if (c.set.empty())
            continue;
        const Riemann r = riemann_sides(c.order, c.n, c.which, c.set, 1000000);
        const double denom = std::max(c.scale, 1e-300);
        worst_rel = std::max({worst_rel, std::abs(r.lhs - c.lhs) / denom, std::abs(r.rhs - c.rhs) / denom});
        ++spots;
    }
    const bool ok = bad == 0 && spots == 20 && worst_rel <= 1e-6;
    return {ok, std::to_string(bad) + "/" + std::to_string(cases.size()) + " failures, "
                    + fmt("min margin %.3g, ", worst) + std::to_string(spots) + " oracle spots, "
                    + fmt("max rel gap %.3g", worst_rel)};
}

Outcome continuous_at_scale()
{
    Rng rng(424242);
    int bad = 0, fd_bad = 0;
    double worst = std::numeric_limits<double>::infinity();
    double worst_fd = 0.0;
    std::vector<ContinuousMixture> mixes;
    for (int t = 0; t < 50; ++t) {
        const double m = 20.0 - rng.uniform() * 18.0;
        const int segments = static_cast<int>(rng.integer(1, 15));
        mixes.push_back(random_log_concave_continuous(m, segments, rng));
        CertifyOptions opt;
        opt.grid_points = 512;
        opt.seed = 77 + t;
        const ConcavityCertificate c = certify(mixes.back(), opt);
        worst = std::min(worst, c.min_margin_eq10);
        if (c.verdict != Verdict::Certified || c.min_margin_eq10 < -1e-9)
            ++bad;
    }
    for (int p = 0; p < 100; ++p) {
        const ContinuousMixture& mix = mixes[p % mixes.size()];
        const ContinuousEvaluator ev(mix);
        const double x = rng.uniform(0.02, 0.98);
        const EvalResult r = ev.derivs(x);
        // Fourth-order central stencils, step scaled to the local length scale of f.
        const double length = std::min(std::abs(r.value / r.d1), std::sqrt(std::abs(r.value / r.d2)));
        const double h = std::min({1e-3, 0.02 * length, 0.25 * std::min(x, 1.0 - x)});
        const double fp1 = ev.density(x + h), fm1 = ev.density(x - h);
        const double fp2 = ev.density(x + 2 * h), fm2 = ev.density(x - 2 * h);
        const double fd1 = (8 * (fp1 - fm1) - (fp2 - fm2)) / (12 * h);
        const double fd2 = (16 * (fp1 + fm1) - (fp2 + fm2) - 30 * ev.density(x)) / (12 * h * h);
        const double e1 = std::abs(fd1 - r.d1) / std::max(std::abs(r.d1), 1e-300);
        const double e2 = std::abs(fd2 - r.d2) / std::max(std::abs(r.d2), 1e-300);
        worst_fd = std::max({worst_fd, e1, e2});
        if (e1 > 1e-5 || e2 > 1e-5)
            ++fd_bad;
    }
    return {bad == 0 && fd_bad == 0, std::to_string(bad) + "/50 not certified, " + fmt("min margin %.3g, ", worst)
                                         + std::to_string(fd_bad) + "/100 derivative mismatches, "
                                         + fmt("max rel gap %.3g", worst_fd)};
}

Outcome kernel_failure()
{
    Rng rng(99);
    int bad = 0;
    for (double m : {2.0, 5.0, 10.0}) {
        for (int t = 0; t < 20; ++t) {
            const double u = rng.uniform();
            const double s = rng.uniform() < 0.5 ? -u : m + u;
            if (s == 0.0 || s == m)
                continue;
            const std::optional<double> x = find_kernel_failure(m, s);
            if (!x || !(*x > 0.0 && *x < 1.0)) {
                ++bad;
                continue;
            }
            const double curv = -s / ((1 - *x) * (1 - *x)) - (m - s) / (*x * *x);
            if (!(kernel_log_curvature(m, s, *x) > 0.0) || !(curv > 0.0))
                ++bad;
        }
        for (int t = 0; t < 20; ++t)
            if (find_kernel_failure(m, rng.uniform(0.0, m)))
                ++bad;
    }
    return {bad == 0, std::to_string(bad) + "/120 wrong answers"};
}

Outcome coefficient_consistency()
{
    Rng rng(31337);
    int ineq_bad = 0;
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const int m = static_cast<int>(rng.integer(2, 12));
        const std::vector<double> w = random_log_concave_weights(m, rng);
        for (int p = 0; p < 20; ++p) {
            const double x = rng.uniform(0.01, 0.99);
            const Direct d = direct_discrete(w, x);
            const long double a = (m - 1.0L) / m * d.d1 * d.d1;
            const long double b = d.g * d.d2;
            const double scale = static_cast<double>(std::abs(a) + std::abs(b));
            const double got = coefficient_curvature_sum(w, x);
            worst = std::max(worst, std::abs(got - static_cast<double>(a - b)) / std::max(scale, 1e-300));
        }
        for (int n = 0; n <= 2 * m - 2; ++n)
            for (CoreInequality which : {CoreInequality::Eq13, CoreInequality::Eq14, CoreInequality::Eq15})
                if (!core_inequalities_discrete(w, n, which).holds(1e-10))
                    ++ineq_bad;
    }
    return {worst <= 1e-9 && ineq_bad == 0,
            fmt("max rel reconstruction gap %.3g, ", worst) + std::to_string(ineq_bad) + " inequality failures"};
}

Outcome sampler_sanity()
{
    const DiscreteMixture uniform(std::vector<double>(6, 1.0));
    std::vector<double> draws = sample(uniform, 100000, 5);
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    const double n = static_cast<double>(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i)
        ks = std::max({ks, std::abs((i + 1) / n - draws[i]), std::abs(draws[i] - i / n)});
    const DiscreteMixture spike({0.0, 0.0, 1.0, 0.0, 0.0, 0.0});
    const std::vector<double> beta = sample(spike, 100000, 6);
    double mean = 0.0;
    for (double v : beta)
        mean += v;
    mean /= static_cast<double>(beta.size());
    return {ks <= 0.01 && std::abs(mean - 4.0 / 7.0) <= 0.01,
            fmt("KS %.4g, ", ks) + fmt("spike mean %.5f vs 4/7", mean)};
}

} // namespace

int main()
{
    run(1, "uniform weights give g = 1", 1.0, uniform_identity);
    run(2, "geometric weights are tight", 2.0, geometric_tightness);
    run(3, "random log-concave discrete mixtures certify", 10.0, discrete_at_scale);
    run(4, "non-log-concave weights are caught", 0.0, necessity);
    run(5, "exact binomial window sweep", 5.0, lemma2_discrete_sweep);
    run(6, "continuous binomial window sweep", 30.0, lemma2_continuous_sweep);
    run(7, "random log-concave continuous mixtures certify", 60.0, continuous_at_scale);
    run(8, "kernel failure regime", 0.0, kernel_failure);
    run(9, "coefficient-level consistency", 0.0, coefficient_consistency);
    run(10, "sampler sanity", 0.0, sampler_sanity);
    std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
    return failures == 0 ? 0 : 1;
}
