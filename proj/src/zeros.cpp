#include "resokit/zeros.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "resokit/errors.hpp"
#include "resokit/parallel.hpp"
#include "resokit/quadrature.hpp"

namespace reso {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kIntegerBand = 0.25;
constexpr double kEdgeAbsTol = 1e-9;
constexpr double kMinPanelFraction = 1e-10;  // of the rectangle perimeter
// Cells holding a multiple zero stop shrinking at this size relative to
// 1 + |center|; below it rounding in z - z0 swamps the edge integrals.
constexpr double kResolutionFloor = 1e-6;

struct Vec2 {
    cplx log_deriv;  // f'/f dz
    cplx moment;     // z f'/f dz
    Vec2& operator+=(const Vec2& o) {
        log_deriv += o.log_deriv;
        moment += o.moment;
        return *this;
    }
    friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
    friend Vec2 operator-(const Vec2& a, const Vec2& b) {
        return {a.log_deriv - b.log_deriv, a.moment - b.moment};
    }
    friend Vec2 operator*(double s, const Vec2& a) { return {s * a.log_deriv, s * a.moment}; }
    Vec2& operator*=(double s) {
        log_deriv *= s;
        moment *= s;
        return *this;
    }
};

double magnitude(const Vec2& v) { return std::abs(v.log_deriv); }

class EdgeIntegrator {
public:
    EdgeIntegrator(const AnalyticEvaluator& f, cplx z0, cplx z1, double perimeter)
        : f_(f), z0_(z0), dz_(z1 - z0),
          min_dt_(kMinPanelFraction * perimeter / std::abs(z1 - z0)),
          tol_density_(kEdgeAbsTol) {}

    Vec2 run() {
        Vec2 total{};
        refine(0.0, 1.0, value_at(0.0), value_at(1.0), total);
        return total;
    }

private:
    cplx point(double t) const { return z0_ + t * dz_; }

    cplx value_at(double t) const {
        const cplx v = f_.value(point(t));
        check(v, t);
        return v;
    }

    void check(cplx v, double t) const {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DomainError("zero-finder: non-finite function value at " + describe(point(t)));
        if (v == cplx{0.0, 0.0})
            throw BoundaryZeroError("zero-finder: exact zero on contour at " + describe(point(t)) +
                                    "; perturb the rectangle");
    }

    static std::string describe(cplx z) {
        return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
    }

    Vec2 integrand(double t) const {
        const cplx z = point(t);
        const auto vd = f_(z);
        check(vd.value, t);
        const cplx q = vd.derivative / vd.value * dz_;
        return {q, z * q};
    }

    void refine(double t0, double t1, cplx fa, cplx fb, Vec2& total) {
        const auto p = quad::gk15<Vec2>([this](double t) { return integrand(t); }, t0, t1);
        const cplx expected = std::log(fb / fa);
        cplx diff = p.kronrod.log_deriv - expected;
        diff.imag(diff.imag() - kTwoPi * std::round(diff.imag() / kTwoPi));
        const bool phase_ok = std::abs(p.kronrod.log_deriv.imag()) < 3.0 && std::abs(diff) < 1e-3;
        if (phase_ok && p.error() <= tol_density_ * (t1 - t0)) {
            total += p.kronrod;
            return;
        }
        if (t1 - t0 < min_dt_)
            throw BoundaryZeroError("zero-finder: zero within tolerance of contour near " +
                                    describe(point(0.5 * (t0 + t1))) + "; perturb the rectangle");
        const double tm = 0.5 * (t0 + t1);
        const cplx fm = value_at(tm);
        refine(t0, tm, fa, fm, total);
        refine(tm, t1, fm, fb, total);
    }

    const AnalyticEvaluator& f_;
    cplx z0_;
    cplx dz_;
    double min_dt_;
    double tol_density_;
};

struct Cell {
    Rectangle rect;
    ContourMoments moments;
};

std::optional<ContourMoments> try_moments(const AnalyticEvaluator& f, const Rectangle& r) {
    try {
        return contour_moments(f, r);
    } catch (const BoundaryZeroError&) {
        return std::nullopt;
    }
}

// Deterministic cut positions tried when a bisection line hits a zero.
constexpr std::array<double, 7> kCutFractions = {0.5, 0.5137, 0.4791, 0.5433, 0.4569, 0.5811, 0.4213};

std::pair<Cell, Cell> split_cell(const AnalyticEvaluator& f, const Cell& cell) {
    const Rectangle& r = cell.rect;
    const bool vertical_cut = r.width() >= r.height();
    for (const double frac : kCutFractions) {
        Rectangle a = r;
        Rectangle b = r;
        if (vertical_cut) {
            const double x = r.re_min + frac * r.width();
            a.re_max = x;
            b.re_min = x;
        } else {
            const double y = r.im_min + frac * r.height();
            a.im_max = y;
            b.im_min = y;
        }
        auto ma = try_moments(f, a);
        if (!ma) continue;
        auto mb = try_moments(f, b);
        if (!mb) continue;
        if (ma->count() + mb->count() != cell.moments.count()) continue;
        return {Cell{a, *ma}, Cell{b, *mb}};
    }
    throw ConsistencyError("zero-finder: winding counts of subcells do not add up");
}

LocatedZero polish(const AnalyticEvaluator& f, const Cell& cell, double tol, int max_iter) {
    const int m = cell.moments.count();
    const Rectangle& r = cell.rect;
    cplx z = cell.moments.first / static_cast<double>(m);
    const double slack = 0.5 * std::max(r.width(), r.height());
    const Rectangle grown{r.re_min - slack, r.re_max + slack, r.im_min - slack, r.im_max + slack};
    if (!r.contains(z) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) z = r.center();

    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
        const auto vd = f(z);
        if (vd.value == cplx{0.0, 0.0}) {
            converged = true;
            break;
        }
        if (vd.derivative == cplx{0.0, 0.0}) break;
        const cplx step = static_cast<double>(m) * vd.value / vd.derivative;
        z -= step;
        if (!grown.contains(z)) break;
        if (std::abs(step) < tol * 1e-3) {
            converged = true;
            break;
        }
    }
    if (!converged) z = r.center();
    return LocatedZero{z, m, std::abs(f.value(z)), converged};
}

}  // namespace

int ContourMoments::count() const { return static_cast<int>(std::lround(count_raw.real())); }

ContourMoments contour_moments(const AnalyticEvaluator& f, const Rectangle& r) {
    r.validate();
    const cplx corners[4] = {{r.re_min, r.im_min}, {r.re_max, r.im_min}, {r.re_max, r.im_max},
                             {r.re_min, r.im_max}};
    Vec2 total{};
    for (int e = 0; e < 4; ++e) {
        EdgeIntegrator edge(f, corners[e], corners[(e + 1) % 4], r.perimeter());
        total += edge.run();
    }
    const cplx two_pi_i{0.0, kTwoPi};
    ContourMoments m{total.log_deriv / two_pi_i, total.moment / two_pi_i};
    const double nearest = std::round(m.count_raw.real());
    if (std::abs(m.count_raw - cplx{nearest, 0.0}) > kIntegerBand || nearest < 0.0)
        throw BoundaryZeroError("zero-finder: argument integral " + std::to_string(m.count_raw.real()) +
                                " is not near an integer; perturb the rectangle");
    return m;
}

int winding_count(const AnalyticEvaluator& f, const Rectangle& r) {
    return contour_moments(f, r).count();
}

ZeroReport locate_zeros(const AnalyticEvaluator& f, const Rectangle& r, double tol,
                        const ZeroFinderOptions& opt) {
    r.validate();
    if (!(tol > 0.0)) throw DomainError("locate_zeros: tol must be positive");

    const double ex = 1e-6 * r.width();
    const double ey = 1e-6 * r.height();
    const cplx shifts[] = {{0.0, 0.0}, {ex, 0.0}, {-ex, 0.0}, {0.0, ey}, {0.0, -ey}, {ex, ey}};
    std::optional<Cell> root;
    for (int attempt = 0; attempt <= opt.max_perturbation_retries && attempt < 6; ++attempt) {
        const Rectangle rr = r.shifted(shifts[attempt]);
        if (auto m = try_moments(f, rr)) {
            root = Cell{rr, *m};
            break;
        }
    }
    if (!root) throw BoundaryZeroError("locate_zeros: zero on the boundary after perturbation retries");

    ZeroReport report;
    std::vector<Cell> active;
    if (root->moments.count() > 0) active.push_back(*root);
    std::vector<Cell> finished;
    while (!active.empty()) {
        std::vector<Cell> to_split;
        for (auto& c : active) {
            const double size = std::max(c.rect.width(), c.rect.height());
            const double floor = std::max(tol, kResolutionFloor * (1.0 + std::abs(c.rect.center())));
            if (c.moments.count() <= 1 || size < floor)
                finished.push_back(c);
            else
                to_split.push_back(c);
        }
        std::vector<std::pair<Cell, Cell>> children(to_split.size());
        parallel_for(to_split.size(), [&](std::size_t i) { children[i] = split_cell(f, to_split[i]); });
        active.clear();
        for (auto& [a, b] : children) {
            if (a.moments.count() > 0) active.push_back(a);
            if (b.moments.count() > 0) active.push_back(b);
        }
    }

    report.zeros.resize(finished.size());
    parallel_for(finished.size(), [&](std::size_t i) {
        report.zeros[i] = polish(f, finished[i], tol, opt.max_newton_iterations);
    });
    std::sort(report.zeros.begin(), report.zeros.end(), [](const auto& a, const auto& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });
    for (const auto& z : report.zeros) report.total_count += z.multiplicity;
    if (report.total_count != root->moments.count())
        throw ConsistencyError("locate_zeros: multiplicities do not sum to the winding count");
    return report;
}

}  // namespace reso
