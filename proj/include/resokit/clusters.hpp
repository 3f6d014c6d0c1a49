#pragma once

#include <string>
#include <variant>
#include <vector>

#include "resokit/analytic.hpp"
#include "resokit/point_set.hpp"

namespace reso {

/// Counterclockwise circular arc center + radius * e^{i theta},
/// theta from theta_start to theta_end (theta_end > theta_start).
struct Arc {
    cplx center;
    double radius = 0.0;
    double theta_start = 0.0;
    double theta_end = 0.0;

    cplx point(double theta) const { return center + std::polar(radius, theta); }
    cplx start() const { return point(theta_start); }
    cplx end() const { return point(theta_end); }
    double length() const { return radius * (theta_end - theta_start); }
};

struct LineSegment {
    cplx from;
    cplx to;
};

using PathPiece = std::variant<Arc, LineSegment>;

/// Closed piecewise-smooth curve. Pieces are traversed in order and each
/// piece ends where the next begins.
struct ClosedPath {
    std::vector<PathPiece> pieces;

    double length() const;
    double signed_area() const;  ///< positive for counterclockwise curves
};

/// Position and derivative of a piece at parameter t in [0, 1].
cplx piece_point(const PathPiece& p, double t);
cplx piece_tangent(const PathPiece& p, double t);

struct Cluster {
    PointMultiset members;
    std::vector<ClosedPath> loops;  ///< outer loop counterclockwise, holes clockwise
    cplx anchor;                    ///< member of least modulus (ties: smallest argument)

    std::vector<Arc> arcs() const;
    double boundary_length() const;
};

struct ClusterDecomposition {
    double radius = 0.0;
    std::vector<Cluster> components;  ///< sorted by |anchor|, then arg(anchor)

    /// Index of the component whose disk union contains z, or -1.
    int component_of(cplx z) const;
};

/// Connected components of the union of closed radius-r disks around s.
/// Two points share a component when joined by a chain of steps <= 2r.
ClusterDecomposition build_clusters(const PointMultiset& s, double r);

/// Boundary of a connected equal-radius disk union as closed arc loops.
std::vector<ClosedPath> boundary_arcs(const PointMultiset& members, double r);

/// {"radius":r,"clusters":[{"anchor":[re,im],"arcs":[{"cx","cy","r","t0","t1"},...]},...]}
std::string clusters_to_json(const ClusterDecomposition& d);

/// Polygons tiling the angle K_A = {-Im z >= A |Re z|}: the triangle above
/// -h_0 and the trapezoids between consecutive cuts.
struct StripPartition {
    double A = 0.0;
    std::vector<double> h;              ///< cut depths h_0 < h_1 < ...
    std::vector<PointMultiset> groups;  ///< points of s per polygon
    std::vector<ClosedPath> contours;   ///< counterclockwise polygon boundaries

    /// Polygon index containing z (by depth), or -1 outside the angle.
    int polygon_of(cplx z) const;
};

/// Chooses cuts greedily: h_0 is the first depth >= max(h0, 2) and each
/// h_{k+1} the first depth in [h_k + 2, 2 h_k] whose horizontal cut through
/// K_A stays at distance >= d from every point of H_zeros.
StripPartition strip_partition(const PointMultiset& s, double A, const PointMultiset& H_zeros,
                               double d, double h0);

}  // namespace reso
