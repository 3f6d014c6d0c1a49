#include "resokit/lk_product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "resokit/errors.hpp"
#include "resokit/quadrature.hpp"

namespace reso {
namespace {

constexpr double kE = std::numbers::e;

std::vector<WeightedPoint> ordered_points(const PointMultiset& s) {
    auto pts = s.points();
    std::stable_sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) {
        const double mx = std::abs(x.location), my = std::abs(y.location);
        if (mx != my) return mx < my;
        return std::arg(x.location) < std::arg(y.location);
    });
    return pts;
}

void require_nonzero(const PointMultiset& s, const char* what) {
    for (const auto& p : s.points())
        if (p.location == cplx{0.0, 0.0}) throw DomainError(std::string(what) + ": point at the origin");
}

const Majorant& majorant_of(const LKConfig& cfg, const PointMultiset& s, std::optional<Majorant>& storage) {
    if (cfg.majorant) return *cfg.majorant;
    storage = default_majorant(s);
    return *storage;
}

// Integrates g(u) over [lo, hi] (0 < lo <= hi) in the variable s = log u,
// splitting at the majorant's kinks.
double log_scale_integral(const std::function<double(double)>& g, double lo, double hi,
                          const std::vector<double>& kinks) {
    std::vector<double> cuts{std::log(lo)};
    for (double k : kinks)
        if (k > lo && k < hi) cuts.push_back(std::log(k));
    cuts.push_back(std::log(hi));
    std::sort(cuts.begin() + 1, cuts.end() - 1);
    quad::Options opt;
    opt.abs_tol = 1e-16;
    opt.rel_tol = 1e-15;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const auto r = quad::integrate<double>(
            [&](double v) {
                const double u = std::exp(v);
                return g(u) * u;
            },
            cuts[i], cuts[i + 1], opt);
        total += r.value;
    }
    return total;
}

}  // namespace

double default_rate_constant() { return std::log(std::acos(std::exp(-1.0))); }

LKConfig LKConfig::targeted(double sigma, int K) {
    if (!(sigma > 0.0)) throw DomainError("LKConfig::targeted: sigma must be positive");
    LKConfig cfg;
    cfg.K = K;
    cfg.a = 2.0 * K / sigma;
    return cfg;
}

double theta(const PointMultiset& s, double t) {
    require_nonzero(s, "theta");
    if (t < 0.0) throw DomainError("theta: t must be non-negative");
    double sum = 0.0;
    for (const auto& p : ordered_points(s))
        sum += p.multiplicity * 0.5 * std::log1p(t * t / std::norm(p.location));
    return sum;
}

double xi(const PointMultiset& s, double t) {
    require_nonzero(s, "xi");
    if (!(t > 0.0)) throw DomainError("xi: t must be positive");
    double sum = 0.0;
    long inside = 0;
    for (const auto& p : ordered_points(s)) {
        const double r = std::abs(p.location);
        if (r >= t)
            sum += p.multiplicity / r;
        else
            inside += p.multiplicity;
    }
    return sum + static_cast<double>(inside) / t;
}

Majorant default_majorant(const PointMultiset& s) {
    require_nonzero(s, "default_majorant");
    std::vector<double> radii;
    std::vector<int> mult;
    for (const auto& p : ordered_points(s)) {
        radii.push_back(std::abs(p.location));
        mult.push_back(p.multiplicity);
    }
    Majorant m;
    m.description = "theta(t) + 2 log(max(t, e))";
    m.kinks = {kE};
    m.value = [radii, mult](double t) {
        double th = 0.0;
        for (std::size_t j = 0; j < radii.size(); ++j)
            th += mult[j] * 0.5 * std::log1p(t * t / (radii[j] * radii[j]));
        return th + 2.0 * std::log(std::max(t, kE));
    };
    // Exact tail: int_T^inf log(1 + u^2/b^2)/(2u^2) du = L(T)/(2T) + (pi/2 - atan(T/b))/b
    // and int_T^inf 2 log(u)/u^2 du = 2 (log T + 1)/T for T >= e.
    m.tail_bound = [radii, mult](double T) {
        double tail = 0.0;
        for (std::size_t j = 0; j < radii.size(); ++j) {
            const double b = radii[j];
            tail += mult[j] * (0.5 * std::log1p(T * T / (b * b)) / T +
                               (0.5 * std::numbers::pi - std::atan(T / b)) / b);
        }
        const double Te = std::max(T, kE);
        tail += 2.0 * (std::log(Te) + 1.0) / Te + (T < kE ? 2.0 * (1.0 / T - 1.0 / kE) : 0.0);
        return tail;
    };
    return m;
}

Majorant constant_majorant(double c) {
    Majorant m;
    m.description = "constant " + std::to_string(c);
    m.value = [c](double) { return c; };
    m.tail_bound = [c](double T) { return c / T; };
    return m;
}

double lk_psi(const LKConfig& cfg, const PointMultiset& s, double t) {
    if (t < cfg.a) throw DomainError("psi: t must be >= a");
    std::optional<Majorant> storage;
    const Majorant& w = majorant_of(cfg, s, storage);
    if (t == cfg.a) return 0.0;
    return cfg.C * log_scale_integral([&](double u) { return w.value(u) / u; }, cfg.a, t, w.kinks);
}

double lk_gamma(const LKConfig& cfg, const PointMultiset& s, double t) {
    if (!(t > 0.0)) throw DomainError("gamma: t must be positive");
    std::optional<Majorant> storage;
    const Majorant& w = majorant_of(cfg, s, storage);
    auto integrand = [&](double u) { return w.value(u) / (u * u); };

    if (w.tail_bound) {
        double T = std::max(2.0 * t, 2.0 * kE);
        int doublings = 0;
        while (w.tail_bound(T) >= cfg.truncation_tol) {
            T *= 2.0;
            if (++doublings > 2000)
                throw ConvergenceError("gamma: tail bound does not reach truncation_tol");
        }
        return log_scale_integral(integrand, t, T, w.kinks);
    }

    // No analytic tail: integrate dyadic shells until they fall below tolerance.
    double total = log_scale_integral(integrand, t, 2.0 * t, w.kinks);
    double lo = 2.0 * t;
    double piece = total;
    for (int i = 0; i < 200; ++i) {
        piece = log_scale_integral(integrand, lo, 2.0 * lo, w.kinks);
        total += piece;
        lo *= 2.0;
        if (piece < cfg.truncation_tol) return total;
    }
    if (piece > 0.1 * total) throw ConvergenceError("gamma: majorant tail is not integrable against u^-2");
    return total;
}

PsiGamma psi_gamma(const LKConfig& cfg, const PointMultiset& s, double t) {
    return {lk_psi(cfg, s, t), lk_gamma(cfg, s, t)};
}

EpsilonSchedule epsilon_schedule(const LKConfig& cfg, const PointMultiset& s) {
    if (cfg.K < 1) throw DomainError("epsilon_schedule: K must be >= 1");
    if (!(cfg.a > 0.0) || !(cfg.C > 0.0)) throw DomainError("epsilon_schedule: a and C must be positive");
    std::optional<Majorant> storage;
    const Majorant& w = majorant_of(cfg, s, storage);
    LKConfig fixed = cfg;
    fixed.majorant = w;

    EpsilonSchedule sched;
    double lo = cfg.a;
    for (int k = 1; k <= cfg.K; ++k) {
        const double target = k;
        double hi = std::max(2.0 * lo, lo + 1.0);
        while (lk_psi(fixed, s, hi) < target) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e300)
                throw InfeasibleError("epsilon_schedule: psi stays below K; increase C or the majorant");
        }
        // Bisection in log t, then Newton with psi'(t) = C w(t)/t.
        for (int it = 0; it < 200 && hi / lo - 1.0 > 1e-13; ++it) {
            const double mid = std::sqrt(lo * hi);
            if (lk_psi(fixed, s, mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        double t = 0.5 * (lo + hi);
        for (int it = 0; it < 8; ++it) {
            const double res = lk_psi(fixed, s, t) - target;
            if (std::abs(res) <= 1e-14 * target) break;
            t -= res / (cfg.C * w.value(t) / t);
        }
        sched.eps.push_back(1.0 / t);
        lo = t;
    }
    sched.tail_bound = cfg.C * lk_gamma(fixed, s, 1.0 / sched.eps.back());
    return sched;
}

namespace {

struct Factor {
    cplx value;
    cplx derivative;
    cplx log_value;  // log of the factor; finite even when value overflows
};

// log cos(w) without overflow: away from the real axis one exponential dominates.
cplx log_cos(cplx w) {
    const cplx I{0.0, 1.0};
    if (w.imag() > 1.0) return -I * w - std::log(2.0) + std::log(1.0 + std::exp(2.0 * I * w));
    if (w.imag() < -1.0) return I * w - std::log(2.0) + std::log(1.0 + std::exp(-2.0 * I * w));
    return std::log(std::cos(w));
}

template <class Visit>
void for_each_factor(const std::vector<WeightedPoint>& pts, const EpsilonSchedule& sched, cplx z,
                     Visit&& visit) {
    for (const auto& p : pts) {
        const cplx l = p.location;
        const cplx l2 = l * l;
        const cplx v = (l - z) * (l + z) / l2;
        const Factor f{v, -2.0 * z / l2, v == cplx{0.0, 0.0} ? cplx{0.0, 0.0} : std::log(v)};
        for (int j = 0; j < p.multiplicity; ++j) visit(f, false);
    }
    for (double e : sched.eps) {
        const cplx ez = e * z;
        if (std::abs(ez) < 1e-8) {
            const cplx lc = -0.5 * ez * ez;
            visit(Factor{std::exp(lc), -e * ez * std::exp(lc), lc}, true);
        } else {
            visit(Factor{std::cos(ez), -e * std::sin(ez), log_cos(ez)}, false);
        }
    }
}

}  // namespace

LKValue lk_H(const PointMultiset& s, const EpsilonSchedule& sched, cplx z) {
    const auto pts = ordered_points(s);
    double log_abs = 0.0;
    cplx phase = 1.0;
    bool zero = false;
    for_each_factor(pts, sched, z, [&](const Factor& f, bool) {
        if (f.value == cplx{0.0, 0.0}) {
            zero = true;
            return;
        }
        log_abs += f.log_value.real();
        phase *= std::polar(1.0, f.log_value.imag());
    });
    if (zero) return {cplx{0.0, 0.0}, -std::numeric_limits<double>::infinity(), true};
    return {std::polar(std::exp(log_abs), std::arg(phase)), log_abs, false};
}

AnalyticEvaluator lk_evaluator(const PointMultiset& s, const EpsilonSchedule& sched) {
    auto pts = ordered_points(s);
    return AnalyticEvaluator(
        [pts, sched](cplx z) {
            std::vector<Factor> factors;
            for_each_factor(pts, sched, z, [&](const Factor& f, bool) { factors.push_back(f); });
            std::size_t zeros = 0, zero_index = 0;
            cplx product = 1.0;
            cplx log_deriv = 0.0;
            for (std::size_t i = 0; i < factors.size(); ++i) {
                if (factors[i].value == cplx{0.0, 0.0}) {
                    ++zeros;
                    zero_index = i;
                    continue;
                }
                product *= factors[i].value;
                log_deriv += factors[i].derivative / factors[i].value;
            }
            if (zeros == 0) return ValueAndDerivative{product, product * log_deriv};
            if (zeros == 1)
                return ValueAndDerivative{cplx{0.0, 0.0}, factors[zero_index].derivative * product};
            return ValueAndDerivative{cplx{0.0, 0.0}, cplx{0.0, 0.0}};
        },
        "entire");
}

LowerBoundReport verify_lower_bound(const PointMultiset& s, const EpsilonSchedule& sched,
                                    double alpha, const Rectangle& region, int grid) {
    region.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("verify_lower_bound: alpha must lie in (0,1)");
    if (grid < 2) throw DomainError("verify_lower_bound: grid must be >= 2");
    LowerBoundReport rep;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const cplx z{region.re_min + region.width() * i / (grid - 1),
                         region.im_min + region.height() * j / (grid - 1)};
            if (std::abs(z.imag()) < 1.0 || std::abs(z) <= 1.0) continue;
            bool admissible = true;
            for (const auto& p : s.points()) {
                if (std::abs(z - p.location) < 1.0 || std::abs(-z - p.location) < 1.0) {
                    admissible = false;
                    break;
                }
            }
            if (!admissible) continue;
            const double r = std::abs(z);
            const double ratio = lk_H(s, sched, z).log_abs / (std::pow(r, alpha) * std::log(r));
            ++rep.kept;
            if (ratio < rep.min_ratio) {
                rep.min_ratio = ratio;
                rep.argmin = z;
            }
        }
    }
    if (rep.kept == 0) throw DomainError("verify_lower_bound: no admissible sample in the region");
    return rep;
}

}  // namespace reso
