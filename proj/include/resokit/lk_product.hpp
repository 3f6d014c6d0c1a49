#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "resokit/analytic.hpp"
#include "resokit/point_set.hpp"

namespace reso {

/// Increasing majorant w(t) used to build the epsilon schedule. tail_bound(T),
/// when present, bounds the integral of w(u)/u^2 over [T, infinity).
struct Majorant {
    std::function<double(double)> value;
    std::function<double(double)> tail_bound;
    std::vector<double> kinks;  ///< points where w is not smooth
    std::string description;
};

/// w(t) = theta(t) + 2 log(max(t, e)).
Majorant default_majorant(const PointMultiset& s);
/// w(t) = c. Mostly useful for tests: the schedule has a closed form.
Majorant constant_majorant(double c);

/// Rate constant C: the magnitude of the root of cos(e^{-C}) = 1/e.
double default_rate_constant();

struct LKConfig {
    double a = 1.0;                       ///< lower limit of the psi integral
    double C = default_rate_constant();   ///< psi prefactor
    std::optional<Majorant> majorant;     ///< empty selects default_majorant(s)
    int K = 8;                            ///< number of cosine factors
    double truncation_tol = 1e-12;

    /// Picks a = 2K / sigma, which bounds the total cosine type sum eps_k by sigma / 2.
    static LKConfig targeted(double sigma, int K);
};

struct EpsilonSchedule {
    std::vector<double> eps;   ///< strictly decreasing
    double tail_bound = 0.0;   ///< bound on sum_{k > K} eps_k, C * gamma(1/eps_K)
};

/// theta(t) = sum_j m_j log(1 + t^2/|l_j|^2) / 2, the exact value of the
/// integral of n(u)/u * t^2/(t^2 + u^2) for a finite set.
double theta(const PointMultiset& s, double t);

/// xi(t) = sum_{|l| >= t} m/|l| + n(t)/t.
double xi(const PointMultiset& s, double t);

struct PsiGamma {
    double psi;
    double gamma;
};

/// psi(t) = C * int_a^t w(u)/u du and gamma(t) = int_t^inf w(u)/u^2 du.
PsiGamma psi_gamma(const LKConfig& cfg, const PointMultiset& s, double t);
double lk_psi(const LKConfig& cfg, const PointMultiset& s, double t);
double lk_gamma(const LKConfig& cfg, const PointMultiset& s, double t);

/// eps_k = 1/t_k with psi(t_k) = k, k = 1..K.
EpsilonSchedule epsilon_schedule(const LKConfig& cfg, const PointMultiset& s);

struct LKValue {
    cplx value;
    double log_abs;
    bool exact_zero = false;
};

/// H(z) = prod (1 - z^2/l^2)^m * prod_k cos(eps_k z), with log|H| accumulated
/// factor by factor. Factor order: points by (|l|, arg), then k ascending.
LKValue lk_H(const PointMultiset& s, const EpsilonSchedule& sched, cplx z);

/// H as an AnalyticEvaluator; the derivative uses the logarithmic derivative
/// (or the product rule at an exact zero).
AnalyticEvaluator lk_evaluator(const PointMultiset& s, const EpsilonSchedule& sched);

struct LowerBoundReport {
    double min_ratio = 0.0;  ///< min of log|H(z)| / (|z|^alpha log|z|)
    cplx argmin;
    std::size_t kept = 0;    ///< admissible samples
};

/// Samples a grid x grid lattice of region and keeps points with
/// dist(z, s) >= 1, dist(-z, s) >= 1, |Im z| >= 1 (and |z| > 1).
LowerBoundReport verify_lower_bound(const PointMultiset& s, const EpsilonSchedule& sched,
                                    double alpha, const Rectangle& region, int grid);

}  // namespace reso
