#pragma once

#include <vector>

#include "resokit/analytic.hpp"

namespace reso {

struct LocatedZero {
    cplx location;
    int multiplicity = 1;
    double residual = 0.0;  ///< |f(location)|
    bool converged = true;  ///< false when Newton polishing failed
};

struct ZeroReport {
    std::vector<LocatedZero> zeros;  ///< sorted by (Re, Im)
    int total_count = 0;             ///< sum of multiplicities
};

/// Contour data of f'/f around a rectangle, normalized by 2*pi*i.
struct ContourMoments {
    cplx count_raw;  ///< (1/2 pi i) * integral of f'/f dz
    cplx first;      ///< (1/2 pi i) * integral of z f'/f dz = sum of enclosed zeros
    int count() const;
};

/// Argument-principle integrals over the boundary of r, counterclockwise.
/// Throws BoundaryZeroError when a zero of f lies (numerically) on the
/// boundary or the raw count is more than 0.25 away from an integer.
ContourMoments contour_moments(const AnalyticEvaluator& f, const Rectangle& r);

/// Number of zeros of f inside r, with multiplicity.
int winding_count(const AnalyticEvaluator& f, const Rectangle& r);

struct ZeroFinderOptions {
    int max_newton_iterations = 50;
    int max_perturbation_retries = 5;
};

/// All zeros of f inside r via recursive bisection of r until each cell holds
/// at most one zero (or is smaller than max(tol, 1e-6 (1 + |center|))),
/// followed by Newton polishing.
/// Multiplicities come from winding counts only.
ZeroReport locate_zeros(const AnalyticEvaluator& f, const Rectangle& r, double tol,
                        const ZeroFinderOptions& opt = {});

}  // namespace reso
