#include "resokit/sharpness.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "resokit/analytics.hpp"
#include "resokit/errors.hpp"
#include "resokit/parallel.hpp"

namespace reso {
namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& text, const std::string& spec) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw ParseError("rate function '" + spec + "': bad number '" + text + "'");
    return v;
}

std::function<double(double)> parse_atom(const std::string& atom, const std::string& spec) {
    if (atom == "log1p") return [](double r) { return std::log1p(r); };
    if (atom == "sqrt") return [](double r) { return std::sqrt(r); };
    if (atom == "id") return [](double r) { return r; };
    if (atom.rfind("pow:", 0) == 0) {
        const double a = parse_number(atom.substr(4), spec);
        if (!(a > 0.0)) throw ParseError("rate function '" + spec + "': exponent must be positive");
        return [a](double r) { return std::pow(r, a); };
    }
    throw ParseError("rate function '" + spec + "': unknown term '" + atom + "'");
}

// Logarithmic sample grid used for the precondition checks.
std::vector<double> sample_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 240; ++i) g.push_back(std::pow(10.0, i / 20.0));
    return g;
}

void require_increasing(const RateFunction& f, const std::vector<double>& grid) {
    double prev = f(0.0);
    if (!(prev >= 0.0)) throw DomainError("rate function " + f.description + " is negative at 0");
    for (double r : grid) {
        const double v = f(r);
        if (!(v > prev)) throw DomainError("rate function " + f.description + " is not strictly increasing");
        prev = v;
    }
}

cplx z_of(double r, double t) { return {std::sqrt(r * r - t * t), -t}; }

}  // namespace

RateFunction parse_rate(std::string_view spec_view) {
    const std::string spec(spec_view);
    std::vector<std::pair<double, std::function<double(double)>>> terms;
    std::size_t start = 0;
    while (true) {
        const auto plus = spec.find('+', start);
        const std::string term = trim(std::string_view(spec).substr(start, plus == std::string::npos ? std::string::npos : plus - start));
        if (term.empty()) throw ParseError("rate function '" + spec + "': empty term");
        double c = 1.0;
        std::string atom = term;
        if (const auto star = term.find('*'); star != std::string::npos) {
            c = parse_number(trim(std::string_view(term).substr(0, star)), spec);
            if (!(c > 0.0)) throw ParseError("rate function '" + spec + "': factor must be positive");
            atom = trim(std::string_view(term).substr(star + 1));
        }
        terms.emplace_back(c, parse_atom(atom, spec));
        if (plus == std::string::npos) break;
        start = plus + 1;
    }
    RateFunction f;
    f.description = spec;
    f.eval = [terms](double r) {
        double s = 0.0;
        for (const auto& [c, g] : terms) s += c * g(r);
        return s;
    };
    return f;
}

double kappa(const RateFunction& tau, const RateFunction& rho, double r) { return 0.5 * (rho(r) + tau(r)); }

double radius_solve(const std::function<double(double)>& kappa_fn, double n) {
    if (n < kappa_fn(0.0)) throw DomainError("radius_solve: n below kappa(0)");
    if (kappa_fn(0.0) == n) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (kappa_fn(hi) < n) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw DomainError("radius_solve: kappa stays bounded below n (unbounded-violation)");
    }
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (kappa_fn(mid) < n)
            lo = mid;
        else
            hi = mid;
    }
    return std::abs(kappa_fn(lo) - n) < std::abs(kappa_fn(hi) - n) ? lo : hi;
}

void CounterexampleSet::check_invariants() const {
    if (indices.size() != radii.size() || indices.size() != centers.size())
        throw ConsistencyError("counterexample: inconsistent lengths");
    long prefix = 0;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const double r = radii[k];
        const cplx z = centers[k];
        if (k > 0 && !(indices[k] > indices[k - 1])) throw ConsistencyError("counterexample: indices not increasing");
        if (!(std::abs(std::abs(z) - r) <= 1e-9 * r)) throw ConsistencyError("counterexample: |z| != r");
        if (!(std::abs(z.imag() + tau(r)) <= 1e-9 * std::max(1.0, tau(r))))
            throw ConsistencyError("counterexample: Im z != -tau(r)");
        if (!(z.real() > 0.0)) throw ConsistencyError("counterexample: Re z not positive");
        if (!(std::ldexp(static_cast<double>(indices[k]), static_cast<int>(k)) <= r))
            throw ConsistencyError("counterexample: 2^k n_k > r_{n_k}");
        if (k >= 1 && !(static_cast<double>(prefix) <= rho(r) - kappa(tau, rho, r)))
            throw ConsistencyError("counterexample: prefix sum exceeds rho - kappa");
        prefix += indices[k];
    }
}

CounterexampleSet build_counterexample(const RateFunction& tau, const RateFunction& rho, int K,
                                       const CounterexampleOptions& opt) {
    if (K < 1) throw DomainError("build_counterexample: K must be >= 1");
    const auto grid = sample_grid();
    require_increasing(tau, grid);
    require_increasing(rho, grid);

    // tau < rho on the upper half of the sampled range, tau(r)/r decaying below 1/2.
    const std::size_t half = grid.size() / 2;
    for (std::size_t i = half; i < grid.size(); ++i)
        if (!(tau(grid[i]) < rho(grid[i])))
            throw DomainError("build_counterexample: precondition tau = o(rho) violated (tau >= rho at r = " +
                              format_g17(grid[i]) + ")");
    for (std::size_t i = half + 1; i < grid.size(); ++i)
        if (!(tau(grid[i]) / grid[i] <= tau(grid[i - 1]) / grid[i - 1] && tau(grid[i]) / grid[i] < 0.5))
            throw DomainError("build_counterexample: precondition tau = o(r) violated");

    CounterexampleSet cs;
    cs.tau = tau;
    cs.rho = rho;
    if (!(rho(grid.back()) / grid.back() < rho(grid[half]) / grid[half])) {
        cs.rho_reduced = true;
        cs.rho.description = "sqrt((" + rho.description + ")*(" + tau.description + "))";
        cs.rho.eval = [tau, rho](double r) { return std::sqrt(rho(r) * tau(r)); };
    }
    const auto& rr = cs.rho;
    const auto kap = [&](double r) { return kappa(tau, rr, r); };

    long iterations = 0;
    long n = std::max(1L, static_cast<long>(std::ceil(kap(0.0))));
    long prefix = 0;
    for (int k = 0; k <= K - 1; ++k) {
        while (true) {
            if (++iterations > opt.iteration_cap)
                throw InfeasibleError("build_counterexample: iteration cap reached at k = " + std::to_string(k) +
                                      " (tau too close to rho on the range)");
            const double r = radius_solve(kap, static_cast<double>(n));
            const double t = tau(r);
            bool ok = t < r && std::ldexp(static_cast<double>(n), k) <= r;
            if (ok && k >= 1) ok = static_cast<double>(prefix) <= rr(r) - kap(r);
            if (ok) {
                cs.indices.push_back(n);
                cs.radii.push_back(r);
                cs.centers.push_back(z_of(r, t));
                prefix += n;
                ++n;
                break;
            }
            ++n;
        }
    }

    std::vector<WeightedPoint> pts;
    for (std::size_t k = 0; k < cs.indices.size(); ++k)
        pts.push_back({cs.centers[k], static_cast<int>(cs.indices[k])});
    if (opt.split) {
        PointMultiset all;
        for (std::size_t k = 0; k < pts.size(); ++k)
            all = all.united(PointMultiset{pts[k]}.split_multiplicities(1e-6 * cs.radii[k]));
        cs.points = all;
    } else {
        cs.points = PointMultiset(pts);
    }
    cs.check_invariants();
    return cs;
}

std::vector<ObstructionRow> obstruction_profile(const CounterexampleSet& cs) {
    cs.check_invariants();
    std::vector<ObstructionRow> rows(cs.indices.size());
    parallel_for(rows.size(), [&](std::size_t k) {
        const double r = cs.radii[k];
        const double t = cs.centers[k].real();
        rows[k] = {static_cast<int>(k), cs.indices[k], r, t, phase_sum(cs.points, t),
                   kappa(cs.tau, cs.rho, r) / cs.tau(r)};
    });
    for (const auto& row : rows)
        if (!(row.p >= row.lower_bound - 1e-9 * std::max(1.0, row.lower_bound)))
            throw ConsistencyError("obstruction_profile: phase sum below its lower bound at k = " +
                                   std::to_string(row.k));
    return rows;
}

CsvTable obstruction_table(const std::vector<ObstructionRow>& rows) {
    CsvTable t;
    t.header = {"k", "n", "r", "t", "p", "lower_bound"};
    for (const auto& r : rows)
        t.add_row({std::to_string(r.k), std::to_string(r.n), format_g17(r.r), format_g17(r.t), format_g17(r.p),
                   format_g17(r.lower_bound)});
    return t;
}

std::string counterexample_to_json(const CounterexampleSet& cs) {
    nlohmann::ordered_json doc;
    doc["tau"] = cs.tau.description;
    doc["rho"] = cs.rho.description;
    doc["rho_reduced"] = cs.rho_reduced;
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < cs.indices.size(); ++k) {
        nlohmann::ordered_json p;
        p["k"] = k;
        p["n"] = cs.indices[k];
        p["r"] = cs.radii[k];
        p["re"] = cs.centers[k].real();
        p["im"] = cs.centers[k].imag();
        arr.push_back(p);
    }
    doc["points"] = arr;
    return doc.dump(2) + "\n";
}

}  // namespace reso
