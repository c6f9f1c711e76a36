#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace adaptrdm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Smooth objective with analytic gradient.
struct ObjectiveBundle {
    std::size_t dimension = 0;
    std::function<double(const VectorXd&)> evaluate;
    std::function<VectorXd(const VectorXd&)> gradient;
    /// Combined evaluation; falls back to the two calls above when unset.
    std::function<double(const VectorXd&, VectorXd&)> evaluate_with_gradient;

    double eval_with_grad(const VectorXd& x, VectorXd& g) const {
        if (evaluate_with_gradient) return evaluate_with_gradient(x, g);
        g = gradient(x);
        return evaluate(x);
    }
};

struct MinimizeOptions {
    double gradient_tolerance = 1e-7;  // max-norm
    std::size_t max_iterations = 10000;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
    /// iteration sink: (iter, energy, gradient max-norm, step length)
    std::function<void(std::size_t, double, double, double)> on_iteration;
};

struct MinimizeResult {
    VectorXd theta;
    double energy = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    bool line_search_warning = false;
};

namespace detail {

struct LinePoint {
    double alpha, f, dphi;
    VectorXd x, g;
};

/// Strong-Wolfe line search (bracket + zoom). Returns alpha = 0 on failure.
template <typename Eval>
LinePoint wolfe_line_search(Eval&& phi, double f0, double dphi0, double c1, double c2) {
    auto zoom = [&](LinePoint lo, LinePoint hi) -> LinePoint {
        for (int it = 0; it < 60; ++it) {
            double a;
            // quadratic interpolation through (lo.f, lo.dphi) and hi.f
            const double da = hi.alpha - lo.alpha;
            const double denom = hi.f - lo.f - lo.dphi * da;
            if (std::abs(denom) > 1e-30) {
                a = lo.alpha - 0.5 * lo.dphi * da * da / denom;
                const double lo_a = std::min(lo.alpha, hi.alpha);
                const double hi_a = std::max(lo.alpha, hi.alpha);
                if (!(a > lo_a + 0.1 * (hi_a - lo_a) && a < hi_a - 0.1 * (hi_a - lo_a)))
                    a = 0.5 * (lo.alpha + hi.alpha);
            } else {
                a = 0.5 * (lo.alpha + hi.alpha);
            }
            LinePoint p = phi(a);
            if (p.f > f0 + c1 * a * dphi0 || p.f >= lo.f) {
                hi = p;
            } else {
                if (std::abs(p.dphi) <= -c2 * dphi0) return p;
                if (p.dphi * (hi.alpha - lo.alpha) >= 0) hi = lo;
                lo = p;
            }
            if (std::abs(hi.alpha - lo.alpha) < 1e-14) break;
        }
        LinePoint fail = lo;
        if (!(lo.f < f0)) fail.alpha = 0.0;
        return fail;
    };

    LinePoint prev{0.0, f0, dphi0, {}, {}};
    double alpha = 1.0;
    for (int it = 0; it < 30; ++it) {
        LinePoint p = phi(alpha);
        if (p.f > f0 + c1 * alpha * dphi0 || (it > 0 && p.f >= prev.f))
            return zoom(prev, p);
        if (std::abs(p.dphi) <= -c2 * dphi0) return p;
        if (p.dphi >= 0) return zoom(p, prev);
        prev = p;
        alpha *= 2.0;
        if (alpha > 1e3) break;
    }
    LinePoint fail{0.0, f0, dphi0, {}, {}};
    return fail;
}

}  // namespace detail

/// BFGS with a strong-Wolfe inexact line search. Terminates when the gradient
/// max-norm drops below tolerance or the iteration budget runs out; on a
/// failed line search the best point found so far comes back with a warning.
inline MinimizeResult minimize(const ObjectiveBundle& obj, const VectorXd& theta0,
                               const MinimizeOptions& opt = {}) {
    const auto n = static_cast<Eigen::Index>(obj.dimension);
    if (theta0.size() != n) throw std::invalid_argument("minimize: dimension mismatch");

    MinimizeResult res;
    if (n == 0) {
        res.theta = theta0;
        res.energy = obj.evaluate ? obj.evaluate(theta0) : 0.0;
        res.converged = true;
        return res;
    }

    VectorXd x = theta0, g(n);
    double f = obj.eval_with_grad(x, g);
    res.theta = x;
    res.energy = f;

    MatrixXd h_inv = MatrixXd::Identity(n, n);
    bool first_step = true;

    for (std::size_t iter = 0; iter < opt.max_iterations; ++iter) {
        res.iterations = iter;
        if (g.cwiseAbs().maxCoeff() < opt.gradient_tolerance) {
            res.converged = true;
            break;
        }
        VectorXd p = -(h_inv * g);
        double dphi0 = g.dot(p);
        if (dphi0 >= 0.0) {  // stale curvature; restart from steepest descent
            h_inv.setIdentity();
            p = -g;
            dphi0 = g.dot(p);
            if (dphi0 >= 0.0) {
                res.converged = true;
                break;
            }
        }

        auto phi = [&](double alpha) {
            detail::LinePoint pt;
            pt.alpha = alpha;
            pt.x = x + alpha * p;
            pt.f = obj.eval_with_grad(pt.x, pt.g);
            pt.dphi = pt.g.dot(p);
            return pt;
        };
        auto accepted = detail::wolfe_line_search(phi, f, dphi0, opt.wolfe_c1, opt.wolfe_c2);
        if (accepted.alpha == 0.0) {
            res.line_search_warning = true;
            break;
        }

        VectorXd s = accepted.x - x;
        VectorXd y = accepted.g - g;
        x = accepted.x;
        g = accepted.g;
        f = accepted.f;
        if (f < res.energy) {
            res.energy = f;
            res.theta = x;
        }
        if (opt.on_iteration)
            opt.on_iteration(iter + 1, f, g.cwiseAbs().maxCoeff(), accepted.alpha);

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (first_step) {
                h_inv *= sy / y.squaredNorm();
                first_step = false;
            }
            const double rho = 1.0 / sy;
            MatrixXd left = MatrixXd::Identity(n, n) - rho * s * y.transpose();
            h_inv = left * h_inv * left.transpose();
            h_inv.noalias() += rho * s * s.transpose();
        }
    }
    if (f < res.energy) {
        res.energy = f;
        res.theta = x;
    }
    return res;
}

/// Central finite-difference gradient, the test oracle for analytic gradients.
inline VectorXd finite_difference_gradient(const std::function<double(const VectorXd&)>& f,
                                           const VectorXd& x, double step = 1e-5) {
    VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        VectorXd xp = x, xm = x;
        xp(i) += step;
        xm(i) -= step;
        g(i) = (f(xp) - f(xm)) / (2.0 * step);
    }
    return g;
}

}  // namespace adaptrdm
