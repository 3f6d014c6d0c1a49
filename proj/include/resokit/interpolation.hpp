#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "resokit/analytic.hpp"
#include "resokit/clusters.hpp"
#include "resokit/lk_product.hpp"
#include "resokit/point_set.hpp"
#include "resokit/zeros.hpp"

namespace reso {

/// G(z) = z e^{-i sigma z}.
cplx G(double sigma, cplx z);

/// Interpolation data as a function of the node.
using NodeData = std::function<cplx(cplx)>;

/// F(z) = sum over members of data(l) / (H'(l) (z - l)), in member order.
/// Throws DegenerateZeroError when H'(l) is (numerically) zero and
/// ConsistencyError when H does not vanish at a member.
cplx residue_block(const AnalyticEvaluator& H, const PointMultiset& members, const NodeData& data,
                   cplx z);
cplx residue_block(const AnalyticEvaluator& H, const PointMultiset& members, double sigma, cplx z);

/// (1 / 2 pi i) times the integral of data(w) / (H(w) (z - w)) over the
/// closed paths, each piece integrated adaptively. z must lie outside the
/// enclosed region. Throws ContourZeroError when |H| < 1e-13 on a path.
cplx contour_block(const AnalyticEvaluator& H, const std::vector<ClosedPath>& paths,
                   const NodeData& data, cplx z);
cplx contour_block(const AnalyticEvaluator& H, const std::vector<ClosedPath>& paths, double sigma,
                   cplx z);

/// One summation block: nodes plus the contour enclosing exactly them.
struct Block {
    PointMultiset members;
    std::vector<ClosedPath> paths;
};

std::vector<Block> blocks_of(const ClusterDecomposition& d);
std::vector<Block> blocks_of(const StripPartition& p);

enum class BlockForm { residue, contour };
enum class BlockOrder { forward, reversed, even_odd };

/// H(z) * sum_n F_n(z). Returns data(l) when z equals a node exactly.
/// Contour form is used only for blocks whose nodes all lie away from z's
/// block; a block containing z's nearest node always uses residue form.
cplx assemble_g(const AnalyticEvaluator& H, const std::vector<Block>& blocks, const NodeData& data,
                cplx z, BlockForm form = BlockForm::residue,
                BlockOrder order = BlockOrder::forward);

/// H(z) = prod (1 - z/l)^m * (sin(delta z) / (delta z))^M, M = N + 1, delta = gamma / M.
AnalyticEvaluator sinc_power_H(const PointMultiset& lambda, double gamma);

enum class Strategy { cluster, strip };
enum class HSource { lk, sinc_power, user };

struct InterpolationOptions {
    Strategy strategy = Strategy::cluster;
    HSource h_source = HSource::lk;
    /// For HSource::user: H in the shifted variable, vanishing simply on the shifted nodes.
    AnalyticEvaluator user_H;
    double cluster_radius = 1.0;
    int lk_K = 8;
    double strip_A = 0.0;   ///< 0 picks the widest angle that keeps the nodes strictly inside
    double strip_d = 0.2;
    double strip_h0 = 2.0;
    Rectangle search{-50.0, 50.0, 0.0, 50.0};
    double zero_tol = 1e-9;
    bool remove_upper = true;
    bool band_check = true;
    double band_half_width = 2048.0;
    std::size_t band_samples = std::size_t{1} << 16;
};

struct ResidualRow {
    cplx lambda;
    cplx g;             ///< g(l) through the limit of the own term
    cplx target;        ///< G(l)
    double residual;    ///< |g - G| / (1 + |G|)
    double f_abs;       ///< |f(l)|
};

struct InterpolationDiagnostics {
    std::vector<ResidualRow> residuals;
    double max_residual = 0.0;
    double g0_abs = 0.0;
    double band_residual = -1.0;  ///< negative when not computed
    cplx band_c_est;
    std::vector<LocatedZero> removed_zeros;
    cplx c;
    bool ok = true;
    std::string failure;
};

struct InterpolantBundle {
    double sigma = 0.0;
    cplx shift;               ///< s0: 2i (cluster) or i (strip)
    PointMultiset lambda;     ///< the requested nodes
    PointMultiset nodes;      ///< {-s0} united with lambda - s0
    AnalyticEvaluator H;      ///< vanishes on nodes
    std::variant<ClusterDecomposition, StripPartition> partition;
    std::vector<Block> blocks;
    AnalyticEvaluator g;      ///< g(z) = g~(z - s0), g(0) = 0, g(l) = G(l)
    AnalyticEvaluator f;      ///< 1 - e^{i sigma z} g(z) / z
    AnalyticEvaluator f1;     ///< f with upper half-plane zeros in the search window reflected
    InterpolationDiagnostics diagnostics;

    /// g~ at w in the shifted variable with the chosen block form and order.
    cplx g_shifted(cplx w, BlockForm form = BlockForm::residue,
                   BlockOrder order = BlockOrder::forward) const;
};

InterpolantBundle build_interpolant(const PointMultiset& lambda, double sigma,
                                    const InterpolationOptions& opt = {});

struct UpperZeroRemoval {
    AnalyticEvaluator f1;
    cplx c;
    std::vector<LocatedZero> zeros;
};

/// f1 = f Q / P with P = prod (z - z_j) over the zeros of f in `search`
/// and Q = prod (z - w_j), w_j = conj(z_j) unless `mirror` is given.
/// c = sum z_j - sum w_j. Throws IncompleteSearchError when f1 still
/// winds around `search`.
UpperZeroRemoval remove_upper_zeros(const AnalyticEvaluator& f, const Rectangle& search,
                                    double tol = 1e-9, const std::vector<cplx>& mirror = {});

/// {"sigma":..,"shift":[..],"max_residual":..,"residuals":[..],...}
std::string diagnostics_to_json(const InterpolantBundle& b);

}  // namespace reso
