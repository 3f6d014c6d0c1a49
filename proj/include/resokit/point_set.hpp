#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "resokit/analytic.hpp"

namespace reso {

struct WeightedPoint {
    cplx location;
    int multiplicity = 1;
    bool operator==(const WeightedPoint&) const = default;
};

/// Finite multiset of complex points. Locations are pairwise distinct:
/// exact duplicates are merged on construction by summing multiplicities.
/// Order of first occurrence is preserved.
class PointMultiset {
public:
    PointMultiset() = default;
    explicit PointMultiset(std::vector<WeightedPoint> points);
    PointMultiset(std::initializer_list<WeightedPoint> points)
        : PointMultiset(std::vector<WeightedPoint>(points)) {}

    /// Same as the constructor but also requires Im < 0 for every point.
    static PointMultiset in_lower_half_plane(std::vector<WeightedPoint> points);

    const std::vector<WeightedPoint>& points() const { return points_; }
    std::size_t distinct() const { return points_.size(); }
    long total() const;  ///< sum of multiplicities
    bool empty() const { return points_.empty(); }

    /// Throws DomainError naming `what` unless every Im < 0.
    void require_lower_half_plane(std::string_view what) const;

    PointMultiset shifted(cplx offset) const;
    PointMultiset united(const PointMultiset& other) const;

    /// Replaces a point of multiplicity m > 1 by m simple points placed on a
    /// circle around it with neighbour spacing `spacing`.
    PointMultiset split_multiplicities(double spacing) const;

    /// Every location repeated by multiplicity.
    std::vector<cplx> expanded() const;

    bool operator==(const PointMultiset&) const = default;

private:
    std::vector<WeightedPoint> points_;
};

/// Parses CSV rows "re,im,mult" (an optional header row is skipped).
PointMultiset parse_points_csv(std::string_view text);

}  // namespace reso
