#include "resokit/analytics.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include "resokit/errors.hpp"
#include "resokit/parallel.hpp"

namespace reso {
namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

double blaschke_sum(const PointMultiset& s) {
    CompensatedSum acc;
    for (const auto& p : s.points()) {
        const double mod2 = std::norm(p.location);
        acc.add(p.multiplicity * std::abs(p.location.imag()) / (1.0 + mod2));
    }
    return acc.value();
}

long counting_function(const PointMultiset& s, double r) {
    long n = 0;
    for (const auto& p : s.points())
        if (std::abs(p.location) < r) n += p.multiplicity;
    return n;
}

long sector_excess(const PointMultiset& s, double delta, double r) {
    if (!(delta > 0.0 && delta < 0.5 * std::numbers::pi))
        throw DomainError("sector_excess: delta must lie in (0, pi/2)");
    s.require_lower_half_plane("sector_excess");
    long n = 0;
    for (const auto& p : s.points()) {
        if (!(std::abs(p.location) < r)) continue;
        const double arg = std::arg(p.location);
        if (arg > -delta || arg < -std::numbers::pi + delta) n += p.multiplicity;
    }
    return n;
}

double log_strip_clearance(const PointMultiset& s) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : s.points()) {
        const double im = p.location.imag();
        if (im == 0.0) throw DomainError("log_strip_clearance: point on the real axis");
        if (im > 0.0) throw DomainError("log_strip_clearance: point in the upper half-plane");
        best = std::min(best, std::log1p(std::abs(p.location.real())) / std::abs(im));
    }
    return best;
}

double phase_sum(const PointMultiset& s, double t) {
    CompensatedSum acc;
    for (const auto& p : s.points())
        acc.add(p.multiplicity * std::abs(p.location.imag()) / std::norm(t - p.location));
    return acc.value();
}

BandLimitResult band_limit_residual(const AnalyticEvaluator& f, double sigma, double half_width,
                                    std::size_t samples) {
    if (!(sigma > 0.0)) throw DomainError("band_limit_residual: sigma must be positive");
    if (samples < 4096 || (samples & (samples - 1)) != 0)
        throw DomainError("band_limit_residual: samples must be a power of two >= 4096");
    if (half_width * sigma < 32.0 * std::numbers::pi)
        throw DomainError("band_limit_residual: grid too short to resolve sigma "
                          "(need half_width * sigma >= 32 pi)");

    const std::size_t n = samples;
    const double dx = 2.0 * half_width / static_cast<double>(n);
    std::vector<cplx> h(n);
    parallel_for(n, [&](std::size_t j) {
        const double x = -half_width + (static_cast<double>(j) + 0.5) * dx;
        h[j] = x * (f.value(cplx{x, 0.0}) - 1.0);
    });

    // The grid is symmetric, so the 5% largest |x| are the two tails.
    const std::size_t tail = std::max<std::size_t>(1, n / 40);
    cplx c_est = 0.0;
    for (std::size_t j = 0; j < tail; ++j) c_est += h[j] + h[n - 1 - j];
    c_est /= static_cast<double>(2 * tail);

    double total_energy = 0.0;
    std::vector<cplx> spectrum(n);
    {
        std::vector<cplx> windowed(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(j) /
                                                   static_cast<double>(n)));
            windowed[j] = w * (h[j] - c_est);
        }
        fftw_plan plan;
        {
            std::lock_guard lock(fftw_planner_mutex());
            plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(windowed.data()),
                                    reinterpret_cast<fftw_complex*>(spectrum.data()), FFTW_FORWARD,
                                    FFTW_ESTIMATE);
        }
        fftw_execute(plan);
        {
            std::lock_guard lock(fftw_planner_mutex());
            fftw_destroy_plan(plan);
        }
    }

    const double bin = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
    const double guard = 2.0 * bin;
    double outside = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double idx = m < n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
        const double freq = idx * bin;
        const double e = std::norm(spectrum[m]);
        total_energy += e;
        if (freq < -guard || freq > 2.0 * sigma + guard) outside += e;
    }
    BandLimitResult r;
    r.c_est = c_est;
    r.residual_fraction = total_energy > 0.0 ? outside / total_energy : 0.0;
    return r;
}

CsvTable counting_table(const PointMultiset& s, const std::vector<double>& radii) {
    CsvTable t;
    t.header = {"r", "N"};
    for (double r : radii) t.add_row({format_g17(r), std::to_string(counting_function(s, r))});
    return t;
}

CsvTable phase_profile(const PointMultiset& s, const std::vector<double>& ts) {
    CsvTable t;
    t.header = {"t", "p"};
    for (double x : ts) t.add_row({format_g17(x), format_g17(phase_sum(s, x))});
    return t;
}

}  // namespace reso
