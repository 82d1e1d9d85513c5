#include "betamix/lemma_lab.hpp"

#include "betamix/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace betamix {

namespace {

std::string format_real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

long long floor_div2(long long v)
{
    return v >= 0 ? v / 2 : -((-v + 1) / 2);
}

} // namespace

// ---- majorization -----------------------------------------------------------

MajorizationResult check_majorization(const MajorizationInstance& inst)
{
    MajorizationResult result;
    const std::size_t n = inst.a.size();
    auto fail = [&](std::string what) {
        result.hypotheses_ok = false;
        result.violations.push_back(std::move(what));
    };
    if (inst.b.size() != n || inst.u.size() != n || inst.v.size() != n) {
        fail("a, b, u, v differ in length");
        result.conclusion_ok = false;
        return result;
    }
    if (inst.continuous && !(inst.m > 0.0))
        fail("domain length m must be positive");
    const double h = inst.continuous && n > 0 ? inst.m / static_cast<double>(n) : 1.0;

    double running_u = 0.0;
    double running_v = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && inst.a[i] > inst.a[i - 1])
            fail("a increases at index " + std::to_string(i));
        if (inst.a[i] < inst.b[i])
            fail("a < b at index " + std::to_string(i));
        if (inst.b[i] < 0.0)
            fail("b negative at index " + std::to_string(i));
        if (inst.u[i] < 0.0 || inst.v[i] < 0.0)
            fail("u or v negative at index " + std::to_string(i));
        running_u += h * inst.u[i];
        running_v += h * inst.v[i];
        if (running_u < running_v)
            fail("running integral of u below that of v at index " + std::to_string(i));
        result.lhs += h * inst.a[i] * inst.u[i];
        result.rhs += h * inst.b[i] * inst.v[i];
        scale += h * (std::abs(inst.a[i] * inst.u[i]) + std::abs(inst.b[i] * inst.v[i]));
    }
    result.conclusion_ok = result.lhs >= result.rhs - 1e-10 * scale;
    return result;
}

// ---- binomial windows, continuous -------------------------------------------

std::string to_string(ContinuousInequality which)
{
    switch (which) {
    case ContinuousInequality::Ineq4:
        return "ineq4";
    case ContinuousInequality::Ineq5:
        return "ineq5";
    case ContinuousInequality::Ineq6:
        return "ineq6";
    }
    return "?";
}

std::string to_string(DiscreteInequality which)
{
    switch (which) {
    case DiscreteInequality::Ineq2p1:
        return "ineq2p1";
    case DiscreteInequality::Ineq2p2:
        return "ineq2p2";
    case DiscreteInequality::Ineq2p3:
        return "ineq2p3";
    }
    return "?";
}

bool lhs_dominates(ContinuousInequality which)
{
    return which != ContinuousInequality::Ineq5;
}

bool lhs_dominates(DiscreteInequality which)
{
    return which != DiscreteInequality::Ineq2p2;
}

Interval lemma2_set(double order, double n, double q, ContinuousInequality which)
{
    switch (which) {
    case ContinuousInequality::Ineq4:
        return {std::max({(n - q) / 2.0, 0.0, n - order}), std::min({(n + q) / 2.0, order, n})};
    case ContinuousInequality::Ineq5:
        return {std::max({(n + 1.0 - q) / 2.0, 0.0, n + 1.0 - order}),
                std::min({(n + 1.0 + q) / 2.0, order, n + 1.0})};
    case ContinuousInequality::Ineq6:
        return {std::max({(n - q) / 2.0, -1.0, n + 1.0 - order}), std::min({(n + q) / 2.0, order - 1.0, n + 1.0})};
    }
    return {};
}

namespace {

struct SidePair {
    double lhs;
    double rhs;
};

SidePair lemma2_integrands(double order, double n, double s, ContinuousInequality which)
{
    const double left = gen_binom_entire(order - 1.0, s).value() * gen_binom_entire(order - 1.0, n - s).value();
    double right = 0.0;
    if (which == ContinuousInequality::Ineq6)
        right = gen_binom_entire(order, s + 1.0).value() * gen_binom_entire(order - 2.0, n - s - 1.0).value();
    else
        right = gen_binom_entire(order, s).value() * gen_binom_entire(order - 2.0, n - s).value();
    return {left, right};
}

struct Sums {
    double lhs = 0.0;
    double rhs = 0.0;
    double scale = 0.0;
};

Sums integrate_sides(double order, double n, ContinuousInequality which, Interval set, const QuadratureConfig& quad,
                     bool coarse)
{
    Sums out;
    for (const QuadratureNode& node : composite_nodes(set.lo, set.hi, {}, quad, coarse)) {
        const SidePair f = lemma2_integrands(order, n, node.s, which);
        out.lhs += node.weight * f.lhs;
        out.rhs += node.weight * f.rhs;
        out.scale += node.weight * (std::abs(f.lhs) + std::abs(f.rhs));
    }
    return out;
}

} // namespace

double ContinuousLemmaCase::margin() const
{
    const double m = lhs_dominates(which) ? lhs - rhs : rhs - lhs;
    return negated ? -m : m;
}

ContinuousLemmaCase lemma2_continuous(double order, double n, double q, ContinuousInequality which,
                                      const QuadratureConfig& quad)
{
    if (!(order > 1.0))
        throw std::invalid_argument("lemma2_continuous: M must exceed 1");
    if (!(q > 0.0))
        throw std::invalid_argument("lemma2_continuous: q must be positive");
    if (!(n > -2.0))
        throw std::invalid_argument("lemma2_continuous: n must exceed -2");
    quad.validate();

    ContinuousLemmaCase c;
    c.order = order;
    c.n = n;
    c.q = q;
    c.which = which;
    c.set = lemma2_set(order, n, q, which);
    const double centre = which == ContinuousInequality::Ineq5 ? n + 1.0 : n;
    c.q_clipped = c.set.empty() || c.set.lo > (centre - q) / 2.0;
    if (c.set.empty())
        return c;

    const Sums fine = integrate_sides(order, n, which, c.set, quad, false);
    const Sums rough = integrate_sides(order, n, which, c.set, quad, true);
    const double gap = std::max(std::abs(fine.lhs - rough.lhs), std::abs(fine.rhs - rough.rhs));
    if (gap > quad.abs_tol * std::max(fine.scale, 1e-300))
        throw QuadratureError("lemma2_continuous: refinements disagree for M=" + format_real(order)
                              + " n=" + format_real(n) + " q=" + format_real(q));
    c.lhs = fine.lhs;
    c.rhs = fine.rhs;
    c.scale = fine.scale;
    return c;
}

// ---- binomial windows, exact ------------------------------------------------

BigInt DiscreteLemmaCase::margin() const
{
    BigInt m = lhs_dominates(which) ? BigInt(lhs - rhs) : BigInt(rhs - lhs);
    return negated ? BigInt(-m) : m;
}

long long lemma2_discrete_max_k(long long n, DiscreteInequality which)
{
    return which == DiscreteInequality::Ineq2p2 ? floor_div2(n + 1) : floor_div2(n);
}

long long lemma2_discrete_full_range_k(long long order, long long n)
{
    return std::min(0LL, n - order);
}

DiscreteLemmaCase lemma2_discrete(long long order, long long n, long long k, DiscreteInequality which)
{
    if (order < 1)
        throw std::invalid_argument("lemma2_discrete: M must be a positive integer");
    if (n < 0)
        throw std::invalid_argument("lemma2_discrete: n must be nonnegative");
    if (2 * k > n + 1)
        throw std::invalid_argument("lemma2_discrete: k must satisfy k <= (n+1)/2");

    DiscreteLemmaCase c;
    c.order = order;
    c.n = n;
    c.k = k;
    c.which = which;
    const long long upper = which == DiscreteInequality::Ineq2p2 ? n - k + 1 : n - k;
    // Outside [-1, n+1] every term has a binomial with a negative lower index.
    const long long lo = std::max(k, -1LL);
    const long long hi = std::min(upper, n + 1);
    for (long long i = lo; i <= hi; ++i) {
        c.lhs += int_binom_exact(order - 1, i) * int_binom_exact(order - 1, n - i);
        if (which == DiscreteInequality::Ineq2p3)
            c.rhs += int_binom_exact(order, i + 1) * int_binom_exact(order - 2, n - i - 1);
        else
            c.rhs += int_binom_exact(order, i) * int_binom_exact(order - 2, n - i);
    }
    return c;
}

std::vector<DiscreteLemmaCase> sweep_lemma2_discrete(int max_order, bool negate)
{
    static constexpr DiscreteInequality all[] = {DiscreteInequality::Ineq2p1, DiscreteInequality::Ineq2p2,
                                                 DiscreteInequality::Ineq2p3};
    std::vector<DiscreteLemmaCase> cases;
    for (long long m = 2; m <= max_order; ++m)
        for (long long n = 0; n <= 2 * m - 2; ++n) {
            const long long k_top = lemma2_discrete_max_k(n, DiscreteInequality::Ineq2p2);
            for (long long k = lemma2_discrete_full_range_k(m, n) - 1; k <= k_top; ++k)
                for (DiscreteInequality which : all) {
                    if (k > lemma2_discrete_max_k(n, which))
                        continue;
                    cases.push_back(lemma2_discrete(m, n, k, which));
                    cases.back().negated = negate;
                }
        }
    return cases;
}

std::vector<ContinuousLemmaCase> sweep_lemma2_continuous(int count, std::uint64_t seed, const QuadratureConfig& quad,
                                                         bool negate)
{
    static constexpr ContinuousInequality all[] = {ContinuousInequality::Ineq4, ContinuousInequality::Ineq5,
                                                   ContinuousInequality::Ineq6};
    Rng rng(seed);
    std::vector<ContinuousLemmaCase> cases;
    for (int draw = 0; draw < count; ++draw) {
        double order = 0.0;
        while (!(order > 1.0))
            order = 20.0 - rng.uniform(0.0, 19.0);
        const double n = rng.uniform(-2.0, 2.0 * order - 2.0);
        double q = 0.0;
        while (!(q > 0.0))
            q = rng.uniform(0.0, 2.0 * order);
        for (ContinuousInequality which : all) {
            cases.push_back(lemma2_continuous(order, n, q, which, quad));
            cases.back().negated = negate;
        }
    }
    return cases;
}

void write_lemma_csv_header(std::ostream& out)
{
    out << "M,n,window,which,lhs,rhs,margin,pass\n";
}

void write_lemma_csv(std::ostream& out, const DiscreteLemmaCase& c)
{
    out << c.order << ',' << c.n << ',' << c.k << ',' << to_string(c.which) << ',' << c.lhs << ',' << c.rhs << ','
        << c.margin() << ',' << (c.holds() ? "true" : "false") << '\n';
}

void write_lemma_csv(std::ostream& out, const ContinuousLemmaCase& c, double tol)
{
    out << format_real(c.order) << ',' << format_real(c.n) << ',' << format_real(c.q) << ',' << to_string(c.which)
        << ',' << format_real(c.lhs) << ',' << format_real(c.rhs) << ',' << format_real(c.margin()) << ','
        << (c.holds(tol) ? "true" : "false") << '\n';
}

// ---- coefficient-level inequalities -----------------------------------------

namespace {

struct BinomialRows {
    explicit BinomialRows(int order)
        : order(order)
    {
        for (int d = 0; d <= 2; ++d) {
            rows[d].resize(order + 1);
            for (int i = 0; i <= order; ++i)
                rows[d][i] = static_cast<long double>(int_binom(order - d, i));
        }
    }

    // (M - d choose i), zero outside [0, M - d].
    long double operator()(int d, long long i) const
    {
        if (i < 0 || i > order - d)
            return 0.0L;
        return rows[d][i];
    }

    int order;
    std::vector<long double> rows[3];
};

struct WeightView {
    std::span<const double> w;

    long double operator()(long long i) const
    {
        return i < 0 || i >= static_cast<long long>(w.size()) ? 0.0L : w[i];
    }
    long double diff(long long i) const { return (*this)(i) - (*this)(i + 1); }
    long double diff2(long long i) const { return (*this)(i) - 2.0L * (*this)(i + 1) + (*this)(i + 2); }
};

int order_of(std::span<const double> weights)
{
    if (weights.size() < 2)
        throw std::invalid_argument("need at least two weights (M >= 1)");
    return static_cast<int>(weights.size()) - 1;
}

} // namespace

InequalitySides core_inequalities_discrete(std::span<const double> weights, int n, CoreInequality which)
{
    const int m = order_of(weights);
    const BinomialRows binom(m);
    const WeightView a{weights};

    InequalitySides out;
    out.lhs_dominates = which != CoreInequality::Eq14;
    out.weights_log_concave = is_log_concave_weights(weights);
    long double lhs = 0.0L;
    long double rhs = 0.0L;
    long double scale = 0.0L;
    for (long long i = -2; i <= n + 2; ++i) {
        const long long j = n - i;
        long double left = 0.0L;
        long double right = 0.0L;
        const long double cl = binom(1, i) * binom(1, j);
        const long double cr = binom(0, i) * binom(2, j);
        switch (which) {
        case CoreInequality::Eq13:
            left = a(i) * a(j) * cl;
            right = a(i) * a(j) * cr;
            break;
        case CoreInequality::Eq14:
            left = a(i) * a(j + 1) * cl;
            right = a(i) * a(j + 1) * cr;
            break;
        case CoreInequality::Eq15:
            left = a(i + 1) * a(j + 1) * cl;
            right = a(i) * a(j + 2) * cr;
            break;
        }
        lhs += left;
        rhs += right;
        scale += std::abs(left) + std::abs(right);
    }
    out.lhs = static_cast<double>(lhs);
    out.rhs = static_cast<double>(rhs);
    out.scale = static_cast<double>(scale);
    return out;
}

InequalitySides coefficient_inequality_12(std::span<const double> weights, int n)
{
    const int m = order_of(weights);
    const BinomialRows binom(m);
    const WeightView a{weights};

    InequalitySides out;
    out.weights_log_concave = is_log_concave_weights(weights);
    long double lhs = 0.0L;
    long double rhs = 0.0L;
    long double scale = 0.0L;
    for (long long i = -2; i <= n + 2; ++i) {
        const long long j = n - i;
        const long double left = a.diff(i) * a.diff(j) * binom(1, i) * binom(1, j);
        const long double right = a(i) * a.diff2(j) * binom(0, i) * binom(2, j);
        lhs += left;
        rhs += right;
        scale += std::abs(left) + std::abs(right);
    }
    out.lhs = static_cast<double>(lhs);
    out.rhs = static_cast<double>(rhs);
    out.scale = static_cast<double>(scale);
    return out;
}

double coefficient_curvature_sum(std::span<const double> weights, double x)
{
    const int m = order_of(weights);
    long double total = 0.0L;
    for (int n = 0; n <= 2 * m - 2; ++n) {
        const InequalitySides s = coefficient_inequality_12(weights, n);
        total += (static_cast<long double>(s.lhs) - s.rhs) * std::pow(1.0L - x, n)
                 * std::pow(static_cast<long double>(x), 2 * m - 2 - n);
    }
    return static_cast<double>(static_cast<long double>(m) * (m - 1) * total);
}

// ---- brute force ------------------------------------------------------------

BruteForceResult brute_force_logconcavity(const Mixture& mix, int samples, std::uint64_t seed,
                                          const QuadratureConfig& quad)
{
    const MixtureEvaluator ev(mix, quad);
    Rng rng(seed);
    BruteForceResult result;
    for (int i = 0; i < samples; ++i) {
        const double x = rng.uniform();
        const double y = rng.uniform();
        const double lambda = rng.uniform();
        const double z = lambda * x + (1.0 - lambda) * y;
        const double fx = ev.density(x);
        const double fy = ev.density(y);
        const double fz = ev.density(z);
        const double chord = std::pow(fx, lambda) * std::pow(fy, 1.0 - lambda);
        ++result.samples;
        if (fz < chord - 1e-10 * std::max({fx, fy, fz})) {
            result.ok = false;
            if (!result.witness)
                result.witness = MidpointWitness{x, y, lambda, std::log(fz), std::log(chord)};
        }
    }
    return result;
}

} // namespace betamix
