#pragma once

#include <vector>

#include "resokit/analytic.hpp"
#include "resokit/io.hpp"
#include "resokit/point_set.hpp"

namespace reso {

/// sum of m |Im l| / (1 + |l|^2).
double blaschke_sum(const PointMultiset& s);

/// Number of points with |l| < r, counted with multiplicity.
long counting_function(const PointMultiset& s, double r);

/// Points with |l| < r whose argument lies outside [-pi + delta, -delta].
long sector_excess(const PointMultiset& s, double delta, double r);

/// Largest C such that no point satisfies -log(1 + |Re l|) <= C Im l:
/// min over points of log(1 + |Re l|) / |Im l|. +infinity for an empty set.
double log_strip_clearance(const PointMultiset& s);

/// p(t) = sum of m |Im l| / |t - l|^2.
double phase_sum(const PointMultiset& s, double t);

struct BandLimitResult {
    cplx c_est;
    double residual_fraction = 0.0;
};

/// Numerical certificate for x (f(x) - 1) in Const + e^{i sigma x} PW_sigma.
/// Samples h(x) = x (f(x) - 1) on a uniform midpoint grid over
/// [-half_width, half_width], removes the constant estimated from the 5% of
/// samples with largest |x|, applies a Hann window and returns the fraction
/// of spectral energy outside the frequency band [0, 2 sigma] (widened by the
/// Hann main-lobe half-width of two bins).
BandLimitResult band_limit_residual(const AnalyticEvaluator& f, double sigma, double half_width,
                                    std::size_t samples);

/// CSV tables "r,N" and "t,p".
CsvTable counting_table(const PointMultiset& s, const std::vector<double>& radii);
CsvTable phase_profile(const PointMultiset& s, const std::vector<double>& ts);

}  // namespace reso
