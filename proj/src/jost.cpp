#include "resokit/jost.hpp"

#include <cmath>

namespace reso {
namespace {

constexpr double kSeriesSwitch = 0.25;
constexpr double kSeriesCutoff = 1e-18;

TrigPair trig_series(cplx mu, double ell) {
    const cplx x = mu * (ell * ell);
    // c = sum (-x)^n/(2n)!, s/ell = sum (-x)^n/(2n+1)!, ds/dmu = ell^3 sum n (-x)^(n-1) (-1)/(2n+1)!
    cplx c_sum = 1.0;
    cplx s_sum = 1.0;
    cplx ds_sum = 0.0;
    cplx power = 1.0;  // (-x)^n
    double fact_even = 1.0;  // (2n)!
    double fact_odd = 1.0;   // (2n+1)!
    for (int n = 1; n < 40; ++n) {
        const cplx prev_power = power;
        power *= -x;
        fact_even *= (2.0 * n - 1.0) * (2.0 * n);
        fact_odd *= (2.0 * n) * (2.0 * n + 1.0);
        const cplx tc = power / fact_even;
        const cplx ts = power / fact_odd;
        const cplx td = -static_cast<double>(n) * prev_power / fact_odd;
        c_sum += tc;
        s_sum += ts;
        ds_sum += td;
        if (std::abs(tc) <= kSeriesCutoff * std::abs(c_sum) &&
            std::abs(ts) <= kSeriesCutoff * std::abs(s_sum) &&
            std::abs(td) <= kSeriesCutoff * std::abs(ds_sum))
            break;
    }
    TrigPair t;
    t.c = c_sum;
    t.s = ell * s_sum;
    t.dc_dmu = -0.5 * ell * t.s;
    t.ds_dmu = ell * ell * ell * ds_sum;
    return t;
}

}  // namespace

TrigPair trig_pair(cplx mu, double ell, SqrtBranch branch) {
    if (std::abs(mu) * ell * ell < kSeriesSwitch) return trig_series(mu, ell);
    cplx root = std::sqrt(mu);
    if (branch == SqrtBranch::opposite) root = -root;
    TrigPair t;
    t.c = std::cos(ell * root);
    t.s = std::sin(ell * root) / root;
    t.dc_dmu = -0.5 * ell * t.s;
    t.ds_dmu = (ell * t.c - t.s) / (2.0 * mu);
    return t;
}

JostState jost_state(const Potential& p, cplx k, SqrtBranch branch) {
    const cplx i{0.0, 1.0};
    const double sigma = p.sigma();
    const cplx e = std::exp(i * k * sigma);
    cplx psi = e;
    cplx dpsi = i * k * e;
    cplx psi_k = i * sigma * e;                 // d psi / dk
    cplx dpsi_k = e * (i - k * sigma);          // d psi' / dk
    const auto& segs = p.segments();
    for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
        const cplx mu = k * k - it->q;
        const TrigPair t = trig_pair(mu, it->length, branch);
        const cplx dc = t.dc_dmu * (2.0 * k);
        const cplx ds = t.ds_dmu * (2.0 * k);
        const cplx dms = (t.s + mu * t.ds_dmu) * (2.0 * k);  // d(mu s)/dk
        const cplx psi_new = t.c * psi - t.s * dpsi;
        const cplx dpsi_new = mu * t.s * psi + t.c * dpsi;
        const cplx psi_k_new = dc * psi + t.c * psi_k - ds * dpsi - t.s * dpsi_k;
        const cplx dpsi_k_new = dms * psi + mu * t.s * psi_k + dc * dpsi + t.c * dpsi_k;
        psi = psi_new;
        dpsi = dpsi_new;
        psi_k = psi_k_new;
        dpsi_k = dpsi_k_new;
    }
    return {psi, dpsi, psi_k, dpsi_k};
}

JostValue jost_value(const Potential& p, cplx k) {
    const auto st = jost_state(p, k);
    return {st.w, st.wp};
}

cplx jost_k_derivative(const Potential& p, cplx k) { return jost_state(p, k).dw_dk; }

AnalyticEvaluator jost_evaluator(Potential p) {
    return AnalyticEvaluator(
        [p = std::move(p)](cplx k) {
            const auto st = jost_state(p, k);
            return ValueAndDerivative{st.w, st.dw_dk};
        },
        "entire");
}

}  // namespace reso
