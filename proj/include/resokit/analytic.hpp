#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>

#include "resokit/errors.hpp"

namespace reso {

using cplx = std::complex<double>;

struct ValueAndDerivative {
    cplx value;
    cplx derivative;
};

/// Uniform handle on an analytic function: evaluation returns the value and
/// the complex derivative at a point. Evaluation must be pure so evaluators
/// can be shared across worker threads.
class AnalyticEvaluator {
public:
    using Fn = std::function<ValueAndDerivative(cplx)>;

    AnalyticEvaluator() = default;
    explicit AnalyticEvaluator(Fn fn, std::string domain = "entire")
        : fn_(std::make_shared<const Fn>(std::move(fn))), domain_(std::move(domain)) {}

    ValueAndDerivative operator()(cplx z) const { return (*fn_)(z); }
    cplx value(cplx z) const { return (*fn_)(z).value; }
    const std::string& domain() const { return domain_; }
    explicit operator bool() const { return static_cast<bool>(fn_); }

private:
    std::shared_ptr<const Fn> fn_;
    std::string domain_ = "entire";
};

/// Closed axis-aligned rectangle in the complex plane.
struct Rectangle {
    double re_min = 0.0;
    double re_max = 0.0;
    double im_min = 0.0;
    double im_max = 0.0;

    /// Throws DomainError unless re_min < re_max and im_min < im_max.
    void validate() const {
        if (!(re_min < re_max) || !(im_min < im_max))
            throw DomainError("rectangle requires re_min < re_max and im_min < im_max");
    }
    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
    double perimeter() const { return 2.0 * (width() + height()); }
    cplx center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
    bool contains(cplx z) const {
        return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min &&
               z.imag() <= im_max;
    }
    Rectangle shifted(cplx d) const {
        return {re_min + d.real(), re_max + d.real(), im_min + d.imag(), im_max + d.imag()};
    }
};

}  // namespace reso
