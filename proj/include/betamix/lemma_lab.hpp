#pragma once

#include "betamix/certifier.hpp"
#include "betamix/mixture.hpp"
#include "betamix/special_functions.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace betamix {

// ---- majorization ----------------------------------------------------------

/// a, b, u, v tabulated either as finite sequences (discrete) or at the
/// midpoints of a.size() equal cells of [0, m] (continuous, integrals are
/// midpoint sums).
struct MajorizationInstance {
    bool continuous = false;
    double m = 0.0;
    std::vector<double> a, b, u, v;
};

struct MajorizationResult {
    bool hypotheses_ok = true;
    bool conclusion_ok = true;
    double lhs = 0.0;
    double rhs = 0.0;
    std::vector<std::string> violations;
};

/// Checks the hypotheses (a nonincreasing, a >= b >= 0, u, v >= 0, running
/// sums of u dominate those of v) and then whether sum a u >= sum b v.
/// Hypothesis failures are reported, never thrown.
MajorizationResult check_majorization(const MajorizationInstance& inst);

// ---- binomial window inequalities ------------------------------------------

enum class ContinuousInequality { Ineq4, Ineq5, Ineq6 };
enum class DiscreteInequality { Ineq2p1, Ineq2p2, Ineq2p3 };

std::string to_string(ContinuousInequality which);
std::string to_string(DiscreteInequality which);

/// True for the "lhs >= rhs" inequalities, false for "lhs <= rhs".
bool lhs_dominates(ContinuousInequality which);
bool lhs_dominates(DiscreteInequality which);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty() const { return !(hi > lo); }
};

/// The integration set of the chosen inequality in closed form: the window
/// |2s - c| <= q (c = n, or n+1 for Ineq5) intersected with the strip that
/// keeps both binomial arguments of the pairing in [0, M].
Interval lemma2_set(double order, double n, double q, ContinuousInequality which);

struct ContinuousLemmaCase {
    double order = 0.0;
    double n = 0.0;
    double q = 0.0;
    ContinuousInequality which = ContinuousInequality::Ineq4;
    Interval set;
    /// The window was wider than the strip, so the strip bounds are active.
    bool q_clipped = false;
    double lhs = 0.0;
    double rhs = 0.0;
    /// Integral of |lhs integrand| + |rhs integrand|.
    double scale = 0.0;
    bool negated = false;

    /// Signed so that >= 0 means the inequality holds.
    double margin() const;
    bool holds(double tol) const { return margin() >= -tol; }
};

/// Both sides by composite quadrature over the closed-form set. Empty sets
/// give lhs = rhs = 0. Throws QuadratureError when refinements disagree.
ContinuousLemmaCase lemma2_continuous(double order, double n, double q, ContinuousInequality which,
                                      const QuadratureConfig& quad = {});

struct DiscreteLemmaCase {
    long long order = 0;
    long long n = 0;
    long long k = 0;
    DiscreteInequality which = DiscreteInequality::Ineq2p1;
    BigInt lhs;
    BigInt rhs;
    bool negated = false;

    BigInt margin() const;
    bool holds() const { return margin() >= 0; }
};

/// Exact sums over i = k .. n-k (or n-k+1 for Ineq2p2) with integer
/// binomials that vanish outside [0, M]. Requires M >= 1, n >= 0 and
/// 2k <= n + 1; throws std::invalid_argument otherwise.
DiscreteLemmaCase lemma2_discrete(long long order, long long n, long long k, DiscreteInequality which);

/// Largest k with a nonempty summation range.
long long lemma2_discrete_max_k(long long n, DiscreteInequality which);
/// Every k at or below this covers all nonzero terms (Vandermonde case).
long long lemma2_discrete_full_range_k(long long order, long long n);

/// Every (M, n, k, which) with 2 <= M <= max_order, 0 <= n <= 2M-2, nonempty
/// range and k >= full_range_k - 1, ordered by (M, n, k, which).
std::vector<DiscreteLemmaCase> sweep_lemma2_discrete(int max_order, bool negate = false);

/// `count` seeded draws of M in (1, 20], n in (-2, 2M-2), q in (0, 2M),
/// each giving one case per inequality.
std::vector<ContinuousLemmaCase> sweep_lemma2_continuous(int count, std::uint64_t seed,
                                                         const QuadratureConfig& quad = {}, bool negate = false);

/// CSV rows M,n,window,which,lhs,rhs,margin,pass (17 significant digits for reals).
void write_lemma_csv_header(std::ostream& out);
void write_lemma_csv(std::ostream& out, const DiscreteLemmaCase& c);
void write_lemma_csv(std::ostream& out, const ContinuousLemmaCase& c, double tol);

// ---- coefficient-level inequalities ----------------------------------------

enum class CoreInequality { Eq13, Eq14, Eq15 };

struct InequalitySides {
    double lhs = 0.0;
    double rhs = 0.0;
    /// Sum of |terms| over both sides.
    double scale = 0.0;
    bool lhs_dominates = true;
    bool weights_log_concave = true;

    double margin() const { return lhs_dominates ? lhs - rhs : rhs - lhs; }
    bool holds(double rel_tol) const { return margin() >= -rel_tol * scale; }
};

/// Coefficient of (1-x)^n x^(2M-2-n) in the product expansions: pairs
/// alpha_i alpha_j (with the index shifts of each inequality) against
/// (M-1 choose i)(M-1 choose j) on the left and (M choose i)(M-2 choose j)
/// on the right, i + j = n. Weights outside [0, M] are zero.
InequalitySides core_inequalities_discrete(std::span<const double> weights, int n, CoreInequality which);

/// sum_{i+j=n} Da_i Da_j (M-1 choose i)(M-1 choose j) versus
/// sum_{i+j=n} a_i D2a_j (M choose i)(M-2 choose j), Da_i = a_i - a_{i+1}.
InequalitySides coefficient_inequality_12(std::span<const double> weights, int n);

/// M(M-1) sum_n (lhs_n - rhs_n) (1-x)^n x^(2M-2-n), which equals
/// ((M-1)/M) g'^2 - g g''.
double coefficient_curvature_sum(std::span<const double> weights, double x);

// ---- brute-force definition check ------------------------------------------

struct BruteForceResult {
    bool ok = true;
    int samples = 0;
    std::optional<MidpointWitness> witness;
};

/// Tests f(l x + (1-l) y) >= f(x)^l f(y)^(1-l) - 1e-10 * max(f) on random
/// triples drawn uniformly from (0,1)^2 x (0,1).
BruteForceResult brute_force_logconcavity(const Mixture& mix, int samples, std::uint64_t seed,
                                          const QuadratureConfig& quad = {});

} // namespace betamix
