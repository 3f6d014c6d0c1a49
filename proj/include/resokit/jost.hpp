#pragma once

#include "resokit/analytic.hpp"
#include "resokit/potential.hpp"

namespace reso {

/// Entire fundamental pair of -y'' = mu*y on an interval of length ell:
/// c = cos(ell*sqrt(mu)), s = sin(ell*sqrt(mu))/sqrt(mu), with mu-derivatives.
struct TrigPair {
    cplx c;
    cplx s;
    cplx dc_dmu;
    cplx ds_dmu;
};

enum class SqrtBranch { principal, opposite };

/// Uses the power series in mu*ell^2 when |mu|*ell^2 < 1/4 and the closed form
/// otherwise. Both c and s are even in sqrt(mu), so the branch only affects
/// rounding.
TrigPair trig_pair(cplx mu, double ell, SqrtBranch branch = SqrtBranch::principal);

/// Jost solution data at x = 0 and its k-derivatives.
struct JostState {
    cplx w;      ///< psi(k, 0)
    cplx wp;     ///< d psi / dx (k, 0)
    cplx dw_dk;  ///< d w / dk
    cplx dwp_dk;
};

/// Propagates (psi, psi') = (e^{ik sigma}, ik e^{ik sigma}) from x = sigma back
/// to x = 0 through exact transfer matrices. Valid for every complex k.
JostState jost_state(const Potential& p, cplx k, SqrtBranch branch = SqrtBranch::principal);

struct JostValue {
    cplx w;
    cplx wp;
};

JostValue jost_value(const Potential& p, cplx k);
cplx jost_k_derivative(const Potential& p, cplx k);

/// w(k) as an AnalyticEvaluator (value, dw/dk).
AnalyticEvaluator jost_evaluator(Potential p);

}  // namespace reso
