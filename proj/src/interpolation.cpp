#include "resokit/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <nlohmann/json.hpp>

#include "resokit/analytics.hpp"
#include "resokit/errors.hpp"
#include "resokit/quadrature.hpp"

namespace reso {
namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double node_scale(cplx l) { return 1.0 + std::abs(l); }

cplx checked_coefficient(const AnalyticEvaluator& H, cplx l, cplx datum) {
    const auto hv = H(l);
    const double scale = node_scale(l);
    if (!(std::abs(hv.derivative) >= 1e-13 * scale))
        throw DegenerateZeroError("residue block: H'(l) vanishes at a node; split multiple nodes first");
    if (std::abs(hv.value) > 1e-10 * std::abs(hv.derivative) * scale)
        throw ConsistencyError("residue block: H does not vanish at a node");
    return datum / hv.derivative;
}

// H'(l) from the mean of H(l + rho e^{it}) / (rho e^{it}) over n equispaced t.
cplx circle_derivative(const AnalyticEvaluator& H, cplx l, double rho, int n) {
    cplx sum = 0.0;
    for (int j = 0; j < n; ++j) {
        const cplx u = std::polar(rho, kTwoPi * j / n);
        sum += H.value(l + u) / u;
    }
    return sum / static_cast<double>(n);
}

struct PreparedBlock {
    std::vector<cplx> nodes;
    std::vector<cplx> coeff;
};

std::vector<std::size_t> block_order(std::size_t n, BlockOrder order) {
    std::vector<std::size_t> idx;
    if (order == BlockOrder::reversed) {
        for (std::size_t i = n; i-- > 0;) idx.push_back(i);
    } else {
        for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
    }
    return idx;
}

bool near_block(const Block& b, cplx z) {
    for (const auto& p : b.members.points()) {
        double reach = 0.0;
        for (const auto& path : b.paths)
            for (const auto& piece : path.pieces)
                reach = std::max(reach, std::abs(piece_point(piece, 0.0) - p.location));
        if (std::abs(z - p.location) <= 1.1 * reach) return true;
    }
    return false;
}

cplx residue_sum(const PreparedBlock& b, cplx z) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < b.nodes.size(); ++i) s += b.coeff[i] / (z - b.nodes[i]);
    return s;
}

// g~ and its derivative from prepared residue blocks; exact nodes return data.
ValueAndDerivative g_tilde(const AnalyticEvaluator& H, const std::vector<PreparedBlock>& blocks,
                           const NodeData& data, cplx w) {
    for (const auto& b : blocks)
        for (std::size_t i = 0; i < b.nodes.size(); ++i)
            if (w == b.nodes[i]) {
                // Derivative at a node from the Cauchy mean over a small circle.
                const double rho = 1e-3 * node_scale(w);
                constexpr int n = 32;
                cplx d = 0.0;
                for (int j = 0; j < n; ++j) {
                    const cplx u = std::polar(rho, kTwoPi * j / n);
                    const auto hv = H(w + u);
                    cplx s = 0.0;
                    for (const auto& bb : blocks) s += residue_sum(bb, w + u);
                    d += hv.value * s / u;
                }
                return {data(w), d / static_cast<double>(n)};
            }
    const auto hv = H(w);
    cplx s = 0.0, ds = 0.0;
    for (const auto& b : blocks)
        for (std::size_t i = 0; i < b.nodes.size(); ++i) {
            const cplx inv = 1.0 / (w - b.nodes[i]);
            s += b.coeff[i] * inv;
            ds -= b.coeff[i] * inv * inv;
        }
    return {hv.value * s, hv.derivative * s + hv.value * ds};
}

double auto_strip_angle(const PointMultiset& nodes) {
    double A = 1.0;
    for (const auto& p : nodes.points()) {
        const double re = std::abs(p.location.real());
        if (re > 0.0) A = std::min(A, 0.5 * (-p.location.imag()) / re);
    }
    return A;
}

}  // namespace

cplx G(double sigma, cplx z) { return z * std::exp(-kI * sigma * z); }

cplx residue_block(const AnalyticEvaluator& H, const PointMultiset& members, const NodeData& data,
                   cplx z) {
    cplx sum = 0.0;
    for (const auto& p : members.points()) {
        if (p.multiplicity != 1)
            throw DegenerateZeroError("residue block: node of multiplicity > 1 is unsupported");
        if (z == p.location) throw DomainError("residue block: z coincides with a node");
        sum += checked_coefficient(H, p.location, data(p.location)) / (z - p.location);
    }
    return sum;
}

cplx residue_block(const AnalyticEvaluator& H, const PointMultiset& members, double sigma, cplx z) {
    return residue_block(H, members, [sigma](cplx l) { return G(sigma, l); }, z);
}

cplx contour_block(const AnalyticEvaluator& H, const std::vector<ClosedPath>& paths,
                   const NodeData& data, cplx z) {
    quad::Options opt;
    opt.abs_tol = 1e-300;
    opt.rel_tol = 1e-11;
    cplx total = 0.0;
    for (const auto& path : paths) {
        for (const auto& piece : path.pieces) {
            auto integrand = [&](double t) {
                const cplx w = piece_point(piece, t);
                const cplx h = H.value(w);
                if (!(std::abs(h) >= 1e-13))
                    throw ContourZeroError("contour block: H vanishes on the contour");
                return data(w) / (h * (z - w)) * piece_tangent(piece, t);
            };
            const auto r = quad::integrate<cplx>(integrand, 0.0, 1.0, opt);
            if (!r.converged) throw ConvergenceError("contour block: quadrature did not converge");
            total += r.value;
        }
    }
    return total / (kTwoPi * kI);
}

cplx contour_block(const AnalyticEvaluator& H, const std::vector<ClosedPath>& paths, double sigma,
                   cplx z) {
    return contour_block(H, paths, [sigma](cplx l) { return G(sigma, l); }, z);
}

std::vector<Block> blocks_of(const ClusterDecomposition& d) {
    std::vector<Block> out;
    for (const auto& c : d.components) out.push_back({c.members, c.loops});
    return out;
}

std::vector<Block> blocks_of(const StripPartition& p) {
    std::vector<Block> out;
    for (std::size_t k = 0; k < p.groups.size(); ++k) {
        if (p.groups[k].empty()) continue;
        out.push_back({p.groups[k], {p.contours[k]}});
    }
    return out;
}

cplx assemble_g(const AnalyticEvaluator& H, const std::vector<Block>& blocks, const NodeData& data,
                cplx z, BlockForm form, BlockOrder order) {
    for (const auto& b : blocks)
        for (const auto& p : b.members.points())
            if (z == p.location) return data(z);

    std::vector<cplx> parts(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        if (form == BlockForm::contour && !near_block(b, z))
            parts[i] = contour_block(H, b.paths, data, z);
        else
            parts[i] = residue_block(H, b.members, data, z);
    }
    cplx sum = 0.0;
    if (order == BlockOrder::even_odd) {
        cplx odd = 0.0, even = 0.0;
        for (std::size_t i = 0; i < parts.size(); ++i) (i % 2 == 0 ? odd : even) += parts[i];
        sum = odd + even;
    } else {
        for (auto i : block_order(parts.size(), order)) sum += parts[i];
    }
    return H.value(z) * sum;
}

AnalyticEvaluator sinc_power_H(const PointMultiset& lambda, double gamma) {
    if (!(gamma > 0.0)) throw DomainError("sinc_power_H: gamma must be positive");
    for (const auto& p : lambda.points())
        if (p.location == cplx{0.0, 0.0}) throw DomainError("sinc_power_H: point at the origin");
    const auto pts = lambda.points();
    const int M = static_cast<int>(lambda.total()) + 1;
    const double delta = gamma / M;
    return AnalyticEvaluator(
        [pts, M, delta](cplx z) {
            cplx prod = 1.0, logd = 0.0;
            int zero_mult = 0;
            cplx zero_slope = 1.0;  // product of the remaining factors at an exact zero
            for (const auto& p : pts) {
                const cplx fac = (p.location - z) / p.location;
                if (fac == cplx{0.0, 0.0}) {
                    zero_mult += p.multiplicity;
                    zero_slope *= std::pow(-1.0 / p.location, p.multiplicity);
                    continue;
                }
                prod *= std::pow(fac, p.multiplicity);
                logd += static_cast<double>(p.multiplicity) / (z - p.location);
            }
            const cplx u = delta * z;
            cplx sinc, sinc_logd;
            if (std::abs(u) < 1e-2) {
                const cplx u2 = u * u;
                sinc = 1.0 - u2 / 6.0 + u2 * u2 / 120.0 - u2 * u2 * u2 / 5040.0;
                sinc_logd = delta * (-u / 3.0 - u * u2 / 45.0 - 2.0 * u * u2 * u2 / 945.0);
            } else {
                sinc = std::sin(u) / u;
                sinc_logd = delta * (std::cos(u) / std::sin(u) - 1.0 / u);
            }
            const cplx sinc_pow = std::pow(sinc, M);
            if (zero_mult == 0) {
                const cplx v = prod * sinc_pow;
                return ValueAndDerivative{v, v * (logd + static_cast<double>(M) * sinc_logd)};
            }
            const cplx deriv = zero_mult == 1 ? zero_slope * prod * sinc_pow : cplx{0.0, 0.0};
            return ValueAndDerivative{cplx{0.0, 0.0}, deriv};
        },
        "entire");
}

cplx InterpolantBundle::g_shifted(cplx w, BlockForm form, BlockOrder order) const {
    const double s = sigma;
    const cplx s0 = shift;
    return assemble_g(H, blocks, [s, s0](cplx v) { return G(s, v + s0); }, w, form, order);
}

namespace {

AnalyticEvaluator make_f(const AnalyticEvaluator& g, double sigma) {
    return AnalyticEvaluator(
        [g, sigma](cplx z) {
            const cplx e = std::exp(kI * sigma * z);
            if (std::abs(z) < 1e-3) {
                // g(z)/z = integral of g'(tz) over t in [0,1]; Simpson's rule
                // is accurate to O(z^4) and avoids the cancellation in g/z.
                auto q = [&g](cplx x) {
                    return (g(cplx{0.0, 0.0}).derivative + 4.0 * g(0.5 * x).derivative + g(x).derivative) / 6.0;
                };
                const double h = 1e-4;
                const cplx qz = q(z);
                const cplx dq = (q(z + h) - q(z - h)) / (2.0 * h);
                return ValueAndDerivative{1.0 - e * qz, -e * (kI * sigma * qz + dq)};
            }
            const auto gv = g(z);
            const cplx ratio = gv.value / z;
            return ValueAndDerivative{1.0 - e * ratio,
                                      -e * (kI * sigma * ratio + gv.derivative / z - ratio / z)};
        },
        "entire");
}

}  // namespace

UpperZeroRemoval remove_upper_zeros(const AnalyticEvaluator& f, const Rectangle& search, double tol,
                                    const std::vector<cplx>& mirror) {
    search.validate();
    const auto report = locate_zeros(f, search, tol);
    UpperZeroRemoval out;
    out.zeros = report.zeros;
    std::vector<cplx> zs, ws;
    for (const auto& z : report.zeros)
        for (int m = 0; m < z.multiplicity; ++m) zs.push_back(z.location);
    if (!mirror.empty()) {
        if (mirror.size() != zs.size())
            throw DomainError("remove_upper_zeros: mirror list must match the zero count");
        for (auto w : mirror)
            if (!(w.imag() < 0.0)) throw DomainError("remove_upper_zeros: mirror points must lie in the lower half-plane");
        ws = mirror;
    } else {
        for (auto z : zs) ws.push_back(std::conj(z));
    }
    if (zs.empty()) {
        out.f1 = f;
        out.c = 0.0;
        return out;
    }
    cplx c = 0.0;
    for (auto z : zs) c += z;
    for (auto w : ws) c -= w;
    out.c = c;

    std::vector<cplx> f_at_zero;
    std::vector<cplx> df_at_zero;
    for (auto z : zs) {
        const auto v = f(z);
        f_at_zero.push_back(v.value);
        df_at_zero.push_back(v.derivative);
    }

    auto value_at = [f, zs, ws, f_at_zero, df_at_zero](cplx z) {
        const auto fv = f(z);
        cplx val = fv.value;
        bool deflated = false;
        for (std::size_t j = 0; j < zs.size(); ++j) {
            const cplx dz = z - zs[j];
            const double dist = std::abs(dz);
            if (!deflated && dist < 1e-2) {
                // Local quotient f(z)/(z - z_j) from the divided difference.
                val = dist > 1e-6 ? (fv.value - f_at_zero[j]) / dz : 0.5 * (fv.derivative + df_at_zero[j]);
                deflated = true;
            } else {
                val /= dz;
            }
            val *= z - ws[j];
        }
        return std::pair<cplx, ValueAndDerivative>{val, fv};
    };

    out.f1 = AnalyticEvaluator(
        [value_at, zs, ws](cplx z) {
            const auto [val, fv] = value_at(z);
            double nearest = std::numeric_limits<double>::infinity();
            for (auto zj : zs) nearest = std::min(nearest, std::abs(z - zj));
            if (nearest > 1e-6 && fv.value != cplx{0.0, 0.0}) {
                cplx logd = fv.derivative / fv.value;
                for (std::size_t j = 0; j < zs.size(); ++j) logd += 1.0 / (z - ws[j]) - 1.0 / (z - zs[j]);
                return ValueAndDerivative{val, val * logd};
            }
            const double h = 1e-5;
            const cplx d = (value_at(z + h).first - value_at(z - h).first) / (2.0 * h);
            return ValueAndDerivative{val, d};
        },
        f.domain());

    if (winding_count(out.f1, search) != 0)
        throw IncompleteSearchError("remove_upper_zeros: f1 still has zeros in the search window");
    return out;
}

InterpolantBundle build_interpolant(const PointMultiset& lambda, double sigma,
                                    const InterpolationOptions& opt) {
    if (!(sigma > 0.0)) throw DomainError("build_interpolant: sigma must be positive");
    if (lambda.empty()) throw DomainError("build_interpolant: empty node set");
    lambda.require_lower_half_plane("build_interpolant");
    for (const auto& p : lambda.points())
        if (p.multiplicity != 1)
            throw DomainError("build_interpolant: nodes must be simple; split multiplicities first");

    InterpolantBundle b;
    b.sigma = sigma;
    b.lambda = lambda;
    b.shift = opt.strategy == Strategy::cluster ? cplx{0.0, 2.0} : cplx{0.0, 1.0};
    b.nodes = PointMultiset{{-b.shift, 1}}.united(lambda.shifted(-b.shift));

    switch (opt.h_source) {
        case HSource::lk: {
            const auto cfg = LKConfig::targeted(sigma, opt.lk_K);
            b.H = lk_evaluator(b.nodes, epsilon_schedule(cfg, b.nodes));
            break;
        }
        case HSource::sinc_power:
            b.H = sinc_power_H(b.nodes, sigma / 3.0);
            break;
        case HSource::user:
            if (!opt.user_H) throw DomainError("build_interpolant: user H source without an evaluator");
            b.H = opt.user_H;
            break;
    }

    if (opt.strategy == Strategy::cluster) {
        auto d = build_clusters(b.nodes, opt.cluster_radius);
        b.blocks = blocks_of(d);
        b.partition = std::move(d);
    } else {
        const double A = opt.strip_A > 0.0 ? opt.strip_A : auto_strip_angle(b.nodes);
        double h0 = opt.strip_h0;
        std::optional<StripPartition> part;
        for (int attempt = 0; attempt < 200 && !part; ++attempt, h0 += opt.strip_d) {
            try {
                part = strip_partition(b.nodes, A, b.nodes, opt.strip_d, h0);
            } catch (const InfeasibleError&) {
            }
        }
        if (!part) throw InfeasibleError("build_interpolant: no admissible strip partition; decrease d");
        b.blocks = blocks_of(*part);
        b.partition = std::move(*part);
    }

    const cplx s0 = b.shift;
    const NodeData data = [sigma, s0](cplx w) { return G(sigma, w + s0); };
    std::vector<PreparedBlock> prepared;
    for (const auto& blk : b.blocks) {
        PreparedBlock pb;
        for (const auto& p : blk.members.points()) {
            pb.nodes.push_back(p.location);
            pb.coeff.push_back(checked_coefficient(b.H, p.location, data(p.location)));
        }
        prepared.push_back(std::move(pb));
    }

    const auto H = b.H;
    b.g = AnalyticEvaluator([H, prepared, data, s0](cplx z) { return g_tilde(H, prepared, data, z - s0); },
                            "entire");
    b.f = make_f(b.g, sigma);

    // Residuals: the own term's limit H'(l) c_l uses an independent Cauchy
    // estimate of H'(l); the remaining terms are evaluated at l.
    auto& diag = b.diagnostics;
    const auto all_nodes = b.nodes.expanded();
    for (std::size_t bi = 0; bi < prepared.size(); ++bi) {
        for (std::size_t i = 0; i < prepared[bi].nodes.size(); ++i) {
            const cplx l = prepared[bi].nodes[i];
            double nearest = 1.0;
            for (auto m : all_nodes)
                if (m != l) nearest = std::min(nearest, std::abs(m - l));
            const cplx dH = circle_derivative(H, l, 0.25 * nearest, 64);
            cplx others = 0.0;
            for (std::size_t bj = 0; bj < prepared.size(); ++bj)
                for (std::size_t j = 0; j < prepared[bj].nodes.size(); ++j)
                    if (bj != bi || j != i) others += prepared[bj].coeff[j] / (l - prepared[bj].nodes[j]);
            const cplx gl = dH * prepared[bi].coeff[i] + H.value(l) * others;
            const cplx target = data(l);
            const cplx orig = l + s0;
            ResidualRow row{orig, gl, target, std::abs(gl - target) / (1.0 + std::abs(target)), 0.0};
            if (orig == cplx{0.0, 0.0} || l == -s0) {
                diag.g0_abs = std::abs(gl);
            } else {
                row.f_abs = std::abs(1.0 - std::exp(kI * sigma * orig) * gl / orig);
                diag.max_residual = std::max(diag.max_residual, row.residual);
            }
            diag.residuals.push_back(row);
        }
    }
    std::stable_sort(diag.residuals.begin(), diag.residuals.end(), [](const auto& x, const auto& y) {
        if (x.lambda.real() != y.lambda.real()) return x.lambda.real() < y.lambda.real();
        return x.lambda.imag() < y.lambda.imag();
    });

    auto fail = [&diag](const std::string& why) {
        diag.ok = false;
        if (!diag.failure.empty()) diag.failure += "; ";
        diag.failure += why;
    };
    if (!(diag.max_residual <= 1e-8)) fail("interpolation residual above 1e-8");
    if (!(diag.g0_abs <= 1e-12)) fail("g(0) above 1e-12");

    if (opt.remove_upper) {
        auto removal = remove_upper_zeros(b.f, opt.search, opt.zero_tol);
        b.f1 = removal.f1;
        diag.c = removal.c;
        diag.removed_zeros = removal.zeros;
    } else {
        b.f1 = b.f;
    }
    if (opt.band_check) {
        const auto band = band_limit_residual(b.f1, sigma, opt.band_half_width, opt.band_samples);
        diag.band_residual = band.residual_fraction;
        diag.band_c_est = band.c_est;
        if (!(band.residual_fraction <= 0.05)) fail("band-limit residual above 0.05");
    }
    return b;
}

std::string diagnostics_to_json(const InterpolantBundle& b) {
    using json = nlohmann::ordered_json;
    auto pair = [](cplx z) { return json::array({z.real(), z.imag()}); };
    const auto& d = b.diagnostics;
    json doc;
    doc["sigma"] = b.sigma;
    doc["shift"] = pair(b.shift);
    doc["nodes"] = static_cast<long>(b.nodes.total());
    doc["blocks"] = static_cast<long>(b.blocks.size());
    doc["max_residual"] = d.max_residual;
    doc["g0_abs"] = d.g0_abs;
    auto rows = json::array();
    for (const auto& r : d.residuals) {
        json jr;
        jr["lambda"] = pair(r.lambda);
        jr["g"] = pair(r.g);
        jr["target"] = pair(r.target);
        jr["residual"] = r.residual;
        jr["f_abs"] = r.f_abs;
        rows.push_back(jr);
    }
    doc["residuals"] = rows;
    doc["c"] = pair(d.c);
    auto zeros = json::array();
    for (const auto& z : d.removed_zeros) {
        json jz;
        jz["location"] = pair(z.location);
        jz["multiplicity"] = z.multiplicity;
        zeros.push_back(jz);
    }
    doc["removed_zeros"] = zeros;
    if (d.band_residual >= 0.0) {
        doc["band_residual"] = d.band_residual;
        doc["band_c_est"] = pair(d.band_c_est);
    } else {
        doc["band_residual"] = nullptr;
    }
    doc["ok"] = d.ok;
    doc["failure"] = d.failure;
    return doc.dump(2) + "\n";
}

}  // namespace reso
