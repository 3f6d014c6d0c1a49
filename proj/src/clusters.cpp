#include "resokit/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <nlohmann/json.hpp>

#include "resokit/errors.hpp"
#include "resokit/parallel.hpp"

namespace reso {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMatchTol = 1e-9;     // endpoint matching, relative to r
constexpr double kMinGap = 1e-12;      // uncovered angular gaps below this are ignored

struct Interval {
    double lo;
    double hi;
};

// Complement in [0, 2pi) of a union of angular intervals, as arcs in
// increasing angle; an arc crossing angle 0 is returned as one piece.
std::vector<Interval> uncovered(std::vector<Interval> covered) {
    if (covered.empty()) return {{0.0, kTwoPi}};
    std::vector<Interval> flat;
    for (auto c : covered) {
        if (c.hi - c.lo >= kTwoPi) return {};
        double lo = std::fmod(c.lo, kTwoPi);
        if (lo < 0.0) lo += kTwoPi;
        const double hi = lo + (c.hi - c.lo);
        if (hi > kTwoPi) {
            flat.push_back({lo, kTwoPi});
            flat.push_back({0.0, hi - kTwoPi});
        } else {
            flat.push_back({lo, hi});
        }
    }
    std::sort(flat.begin(), flat.end(), [](auto a, auto b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (auto c : flat) {
        if (!merged.empty() && c.lo <= merged.back().hi)
            merged.back().hi = std::max(merged.back().hi, c.hi);
        else
            merged.push_back(c);
    }
    std::vector<Interval> gaps;
    double cursor = 0.0;
    for (auto m : merged) {
        if (m.lo - cursor > kMinGap) gaps.push_back({cursor, m.lo});
        cursor = std::max(cursor, m.hi);
    }
    if (kTwoPi - cursor > kMinGap) gaps.push_back({cursor, kTwoPi});
    if (gaps.size() >= 2 && gaps.front().lo == 0.0 && gaps.back().hi == kTwoPi) {
        gaps.back().hi = kTwoPi + gaps.front().hi;
        gaps.erase(gaps.begin());
    }
    if (gaps.size() == 1 && gaps.front().lo == 0.0 && gaps.front().hi == kTwoPi) return gaps;
    return gaps;
}

std::vector<ClosedPath> stitch(const std::vector<Arc>& arcs, double r) {
    const double tol = kMatchTol * r;
    std::vector<int> next(arcs.size(), -1);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const cplx e = arcs[i].end();
        int found = -1;
        for (std::size_t j = 0; j < arcs.size(); ++j) {
            if (std::abs(arcs[j].start() - e) <= tol) {
                if (found >= 0 && static_cast<std::size_t>(found) != j)
                    throw ConsistencyError("boundary_arcs: degenerate multiple circle intersection");
                found = static_cast<int>(j);
            }
        }
        if (found < 0) throw ConsistencyError("boundary_arcs: open arc chain");
        next[i] = found;
    }
    std::vector<bool> used(arcs.size(), false);
    std::vector<ClosedPath> loops;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        if (used[i]) continue;
        ClosedPath loop;
        std::size_t j = i;
        while (!used[j]) {
            used[j] = true;
            loop.pieces.push_back(arcs[j]);
            j = static_cast<std::size_t>(next[j]);
        }
        if (j != i) throw ConsistencyError("boundary_arcs: arc chain does not close");
        loops.push_back(std::move(loop));
    }
    // Outer loop first, then holes; each group in order of first arc.
    std::stable_sort(loops.begin(), loops.end(),
                     [](const auto& a, const auto& b) { return a.signed_area() > b.signed_area(); });
    return loops;
}

std::vector<ClosedPath> boundary_arcs_once(const std::vector<cplx>& centers, double r) {
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        std::vector<Interval> covered;
        for (std::size_t j = 0; j < centers.size(); ++j) {
            if (i == j) continue;
            const cplx d = centers[j] - centers[i];
            const double dist = std::abs(d);
            if (dist >= 2.0 * r) continue;
            const double phi = std::arg(d);
            const double half = std::acos(dist / (2.0 * r));
            covered.push_back({phi - half, phi + half});
        }
        for (auto g : uncovered(std::move(covered))) arcs.push_back({centers[i], r, g.lo, g.hi});
    }
    return stitch(arcs, r);
}

bool anchor_less(cplx a, cplx b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    return std::arg(a) < std::arg(b);
}

}  // namespace

cplx piece_point(const PathPiece& p, double t) {
    if (const auto* a = std::get_if<Arc>(&p))
        return a->point(a->theta_start + t * (a->theta_end - a->theta_start));
    const auto& s = std::get<LineSegment>(p);
    return s.from + t * (s.to - s.from);
}

cplx piece_tangent(const PathPiece& p, double t) {
    if (const auto* a = std::get_if<Arc>(&p)) {
        const double span = a->theta_end - a->theta_start;
        const double th = a->theta_start + t * span;
        return cplx{0.0, 1.0} * std::polar(a->radius, th) * span;
    }
    const auto& s = std::get<LineSegment>(p);
    return s.to - s.from;
}

double ClosedPath::length() const {
    double len = 0.0;
    for (const auto& p : pieces) {
        if (const auto* a = std::get_if<Arc>(&p))
            len += a->length();
        else
            len += std::abs(std::get<LineSegment>(p).to - std::get<LineSegment>(p).from);
    }
    return len;
}

double ClosedPath::signed_area() const {
    double twice = 0.0;
    for (const auto& p : pieces) {
        if (const auto* a = std::get_if<Arc>(&p)) {
            const double cx = a->center.real(), cy = a->center.imag(), r = a->radius;
            const double t0 = a->theta_start, t1 = a->theta_end;
            twice += r * cx * (std::sin(t1) - std::sin(t0)) - r * cy * (std::cos(t1) - std::cos(t0)) +
                     r * r * (t1 - t0);
        } else {
            const auto& s = std::get<LineSegment>(p);
            twice += s.from.real() * s.to.imag() - s.to.real() * s.from.imag();
        }
    }
    return 0.5 * twice;
}

std::vector<Arc> Cluster::arcs() const {
    std::vector<Arc> out;
    for (const auto& loop : loops)
        for (const auto& p : loop.pieces) out.push_back(std::get<Arc>(p));
    return out;
}

double Cluster::boundary_length() const {
    double len = 0.0;
    for (const auto& loop : loops) len += loop.length();
    return len;
}

int ClusterDecomposition::component_of(cplx z) const {
    for (std::size_t i = 0; i < components.size(); ++i)
        for (const auto& p : components[i].members.points())
            if (std::abs(z - p.location) <= radius) return static_cast<int>(i);
    return -1;
}

std::vector<ClosedPath> boundary_arcs(const PointMultiset& members, double r) {
    if (!(r > 0.0)) throw DomainError("boundary_arcs: radius must be positive");
    if (members.empty()) return {};
    std::vector<cplx> centers;
    for (const auto& p : members.points()) centers.push_back(p.location);
    try {
        return boundary_arcs_once(centers, r);
    } catch (const ConsistencyError&) {
        // Near-degenerate triple intersections: retry once at a minutely larger radius.
        return boundary_arcs_once(centers, r * (1.0 + 1e-10));
    }
}

ClusterDecomposition build_clusters(const PointMultiset& s, double r) {
    if (!(r > 0.0)) throw DomainError("build_clusters: radius must be positive");
    if (s.empty()) throw DomainError("build_clusters: empty point set");
    const auto& pts = s.points();
    const std::size_t n = pts.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(pts[i].location - pts[j].location) <= 2.0 * r) {
                const auto a = find(i), b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }

    std::vector<std::vector<WeightedPoint>> groups;
    std::vector<std::size_t> group_of_root(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto root = find(i);
        if (group_of_root[root] == n) {
            group_of_root[root] = groups.size();
            groups.emplace_back();
        }
        groups[group_of_root[root]].push_back(pts[i]);
    }
    for (auto& g : groups)
        std::stable_sort(g.begin(), g.end(),
                         [](const auto& a, const auto& b) { return anchor_less(a.location, b.location); });
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return anchor_less(a.front().location, b.front().location); });

    ClusterDecomposition out;
    out.radius = r;
    out.components.resize(groups.size());
    parallel_for(groups.size(), [&](std::size_t i) {
        Cluster c;
        c.members = PointMultiset(groups[i]);
        c.anchor = groups[i].front().location;
        c.loops = boundary_arcs(c.members, r);
        out.components[i] = std::move(c);
    });
    return out;
}

std::string clusters_to_json(const ClusterDecomposition& d) {
    nlohmann::ordered_json doc;
    doc["radius"] = d.radius;
    auto clusters = nlohmann::ordered_json::array();
    for (const auto& c : d.components) {
        nlohmann::ordered_json jc;
        jc["anchor"] = {c.anchor.real(), c.anchor.imag()};
        auto members = nlohmann::ordered_json::array();
        for (const auto& p : c.members.points())
            members.push_back({p.location.real(), p.location.imag(), p.multiplicity});
        jc["members"] = members;
        auto arcs = nlohmann::ordered_json::array();
        for (const auto& a : c.arcs()) {
            nlohmann::ordered_json ja;
            ja["cx"] = a.center.real();
            ja["cy"] = a.center.imag();
            ja["r"] = a.radius;
            ja["t0"] = a.theta_start;
            ja["t1"] = a.theta_end;
            arcs.push_back(ja);
        }
        jc["arcs"] = arcs;
        clusters.push_back(jc);
    }
    doc["clusters"] = clusters;
    return doc.dump(2) + "\n";
}

int StripPartition::polygon_of(cplx z) const {
    const double depth = -z.imag();
    if (depth < A * std::abs(z.real())) return -1;
    for (std::size_t k = 0; k < h.size(); ++k)
        if (depth <= h[k]) return static_cast<int>(k);
    return -1;
}

namespace {

double distance_to_cut(cplx p, double depth, double A) {
    const double dx = std::max(0.0, std::abs(p.real()) - depth / A);
    const double dy = p.imag() + depth;
    return std::hypot(dx, dy);
}

// Smallest admissible depth >= lo reached by jumping past violating points,
// or a value > hi when none exists in [lo, hi].
double next_cut(double lo, double hi, double A, const std::vector<std::pair<cplx, double>>& avoid) {
    double h = lo;
    for (std::size_t guard = 0; guard < 10 * avoid.size() + 10; ++guard) {
        bool moved = false;
        for (const auto& [p, dist] : avoid) {
            if (distance_to_cut(p, h, A) < dist) {
                h = std::max(h, -p.imag() + dist) * (1.0 + 1e-14) + 1e-300;
                moved = true;
            }
        }
        if (!moved || h > hi) return h;
    }
    return h;
}

}  // namespace

StripPartition strip_partition(const PointMultiset& s, double A, const PointMultiset& H_zeros,
                               double d, double h0) {
    if (!(A > 0.0)) throw DomainError("strip_partition: A must be positive");
    if (!(d > 0.0 && d < 1.0)) throw DomainError("strip_partition: d must lie in (0, 1)");
    double deepest = 0.0;
    for (const auto& p : s.points()) {
        if (!(-p.location.imag() > A * std::abs(p.location.real())))
            throw DomainError("strip_partition: points must lie inside the angle K_A");
        deepest = std::max(deepest, -p.location.imag());
    }

    std::vector<std::pair<cplx, double>> avoid;
    for (const auto& p : H_zeros.points()) avoid.emplace_back(p.location, d);
    for (const auto& p : s.points()) avoid.emplace_back(p.location, 1e-9 * (1.0 + std::abs(p.location)));

    StripPartition part;
    part.A = A;
    const double start = std::max(h0, 2.0);
    double h = next_cut(start, std::numeric_limits<double>::infinity(), A, avoid);
    part.h.push_back(h);
    while (part.h.back() <= deepest) {
        const double prev = part.h.back();
        const double next = next_cut(prev + 2.0, 2.0 * prev, A, avoid);
        if (next > 2.0 * prev)
            throw InfeasibleError("strip_partition: no admissible cut in [h+2, 2h] after depth " +
                                  std::to_string(prev) + "; decrease d");
        part.h.push_back(next);
    }

    part.groups.assign(part.h.size(), PointMultiset{});
    std::vector<std::vector<WeightedPoint>> groups(part.h.size());
    for (const auto& p : s.points()) groups[static_cast<std::size_t>(part.polygon_of(p.location))].push_back(p);
    for (std::size_t k = 0; k < groups.size(); ++k) part.groups[k] = PointMultiset(groups[k]);

    auto corner = [A](double depth, double side) { return cplx{side * depth / A, -depth}; };
    for (std::size_t k = 0; k < part.h.size(); ++k) {
        ClosedPath poly;
        if (k == 0) {
            const cplx apex{0.0, 0.0};
            poly.pieces = {LineSegment{apex, corner(part.h[0], -1.0)},
                           LineSegment{corner(part.h[0], -1.0), corner(part.h[0], 1.0)},
                           LineSegment{corner(part.h[0], 1.0), apex}};
        } else {
            const double top = part.h[k - 1], bottom = part.h[k];
            poly.pieces = {LineSegment{corner(top, -1.0), corner(bottom, -1.0)},
                           LineSegment{corner(bottom, -1.0), corner(bottom, 1.0)},
                           LineSegment{corner(bottom, 1.0), corner(top, 1.0)},
                           LineSegment{corner(top, 1.0), corner(top, -1.0)}};
        }
        part.contours.push_back(std::move(poly));
    }
    return part;
}

}  // namespace reso
