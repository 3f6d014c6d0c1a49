#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "resokit/io.hpp"
#include "resokit/point_set.hpp"

namespace reso {

/// Increasing unbounded map [0, inf) -> [0, inf) with a canonical text form.
struct RateFunction {
    std::function<double(double)> eval;
    std::string description;

    double operator()(double r) const { return eval(r); }
};

/// Grammar: sum of terms joined by '+'; a term is an optional "<c>*" factor
/// followed by one of log1p, sqrt, id, pow:<a> (a > 0).
/// Examples: "log1p", "pow:0.5", "2*log1p+0.5*sqrt".
RateFunction parse_rate(std::string_view spec);

/// (rho(r) + tau(r)) / 2.
double kappa(const RateFunction& tau, const RateFunction& rho, double r);

/// Solution r of kappa_fn(r) = n for increasing kappa_fn, bisected to full
/// double resolution (so |kappa(r) - n| <= 1e-10 n). Throws DomainError when
/// n < kappa_fn(0) or kappa_fn stays below n on [0, 1e300].
double radius_solve(const std::function<double(double)>& kappa_fn, double n);

struct CounterexampleOptions {
    bool split = false;             ///< replace z_{n_k} by n_k simple points 1e-6 r apart
    long iteration_cap = 1000000;
};

struct CounterexampleSet {
    RateFunction tau;
    RateFunction rho;               ///< after the automatic o(r) reduction, if applied
    bool rho_reduced = false;
    std::vector<long> indices;      ///< n_0 < n_1 < ...
    std::vector<double> radii;      ///< r_{n_k}
    std::vector<cplx> centers;      ///< z_{n_k}
    PointMultiset points;           ///< z_{n_k} with multiplicity n_k (or split)

    /// Throws ConsistencyError naming the first violated invariant.
    void check_invariants() const;
};

/// Greedy minimal construction: n_0 is the least n with tau(r_n) < r_n and
/// n <= r_n; n_k the least n > n_{k-1} with 2^k n <= r_n and
/// n_0 + ... + n_{k-1} <= rho(r_n) - kappa(r_n).
CounterexampleSet build_counterexample(const RateFunction& tau, const RateFunction& rho, int K,
                                       const CounterexampleOptions& opt = {});

struct ObstructionRow {
    int k;
    long n;
    double r;
    double t;            ///< Re z_{n_k}
    double p;            ///< phase sum at t
    double lower_bound;  ///< kappa(r) / tau(r)
};

/// Phase sum at t_k against kappa/tau; throws ConsistencyError if
/// p(t_k) < lower_bound - 1e-9 max(1, lower_bound).
std::vector<ObstructionRow> obstruction_profile(const CounterexampleSet& cs);

/// Header "k,n,r,t,p,lower_bound".
CsvTable obstruction_table(const std::vector<ObstructionRow>& rows);

/// {"tau":..,"rho":..,"rho_reduced":..,"points":[{"k","n","r","re","im"},...]}
std::string counterexample_to_json(const CounterexampleSet& cs);

}  // namespace reso
