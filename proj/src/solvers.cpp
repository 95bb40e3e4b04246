#include "cplab/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "cplab/rng.hpp"

namespace cplab {

namespace {

void check_shapes(const Eigen::Ref<const Eigen::MatrixXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::VectorXd* phi) {
    if (x.rows() < 1 || x.cols() < 1) throw ShapeError("solver: need m >= 1 and p >= 1");
    if (x.rows() != y.size())
        throw ShapeError("solver: x rows " + std::to_string(x.rows()) + " vs y length " +
                         std::to_string(y.size()));
    if (phi && phi->size() != x.cols())
        throw ShapeError("solver: phi length " + std::to_string(phi->size()) + " vs p " +
                         std::to_string(x.cols()));
}

SegmentFit make_fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& y, Eigen::VectorXd phi,
                    double gamma, double weight, bool converged, long iterations) {
    SegmentFit fit;
    fit.rss = (y - x * phi).squaredNorm();
    fit.penalty_value = weight * bridge_penalty(phi, gamma);
    fit.objective = fit.rss + fit.penalty_value;
    fit.phi_hat = std::move(phi);
    fit.converged = converged;
    fit.iterations = iterations;
    return fit;
}

// Quadratic form pieces shared by the iterative routes.
struct Gram {
    Eigen::MatrixXd a;  // X'X
    Eigen::VectorXd b;  // X'y
    double yty;
    double objective(const Eigen::VectorXd& phi, double gamma, double weight) const {
        return phi.dot(a * phi) - 2.0 * b.dot(phi) + yty + weight * bridge_penalty(phi, gamma);
    }
};

Gram make_gram(const Eigen::Ref<const Eigen::MatrixXd>& x,
               const Eigen::Ref<const Eigen::VectorXd>& y) {
    return {x.transpose() * x, x.transpose() * y, y.squaredNorm()};
}

} // namespace

void SolverSettings::validate() const {
    if (max_iterations < 1) throw ConfigError("SolverSettings: max_iterations must be >= 1");
    if (!(tolerance > 0.0 && tolerance < 1.0))
        throw ConfigError("SolverSettings: tolerance must lie in (0, 1)");
    if (multistart_count < 1) throw ConfigError("SolverSettings: multistart_count must be >= 1");
    if (!(step_shrink > 0.0 && step_shrink < 1.0))
        throw ConfigError("SolverSettings: step_shrink must lie in (0, 1)");
}

double bridge_penalty(const Eigen::VectorXd& phi, double gamma) {
    double s = 0.0;
    for (long u = 0; u < phi.size(); ++u) s += std::pow(std::abs(phi[u]), gamma);
    return s;
}

double segment_objective(const Eigen::Ref<const Eigen::MatrixXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& y,
                         const Eigen::VectorXd& phi, const PenaltySpec& spec) {
    check_shapes(x, y, &phi);
    spec.validate();
    const long m = x.rows();
    const double weight = spec.lambda(m) / static_cast<double>(m);
    return (y - x * phi).squaredNorm() + weight * bridge_penalty(phi, spec.gamma);
}

SegmentFit ols_fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
    check_shapes(x, y, nullptr);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(x);
    Eigen::VectorXd phi = cod.solve(y); // minimum-norm least squares
    SegmentFit fit = make_fit(x, y, std::move(phi), 1.0, 0.0, true, 1);
    return fit;
}

SegmentFit ridge_closed_form(const Eigen::Ref<const Eigen::MatrixXd>& x,
                             const Eigen::Ref<const Eigen::VectorXd>& y, double weight) {
    check_shapes(x, y, nullptr);
    const long p = x.cols();
    const Gram g = make_gram(x, y);
    Eigen::MatrixXd lhs = g.a + weight * Eigen::MatrixXd::Identity(p, p);
    Eigen::VectorXd phi = lhs.ldlt().solve(g.b);
    return make_fit(x, y, std::move(phi), 2.0, weight, true, 1);
}

SegmentFit lasso_cd_fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y, double weight,
                        const SolverSettings& settings, std::vector<double>* objective_trace) {
    check_shapes(x, y, nullptr);
    settings.validate();
    const long p = x.cols();
    const Gram g = make_gram(x, y);
    const double thresh = weight / 2.0;

    Eigen::VectorXd phi = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd q = Eigen::VectorXd::Zero(p); // X'X phi, kept incrementally
    bool converged = false;
    long sweeps = 0;
    if (objective_trace) objective_trace->push_back(g.objective(phi, 1.0, weight));
    while (sweeps < settings.max_iterations) {
        ++sweeps;
        double max_change = 0.0;
        for (long j = 0; j < p; ++j) { // fixed ascending order for determinism
            const double ajj = g.a(j, j);
            double next = 0.0;
            if (ajj > 0.0) {
                const double rho = g.b[j] - (q[j] - ajj * phi[j]);
                const double mag = std::abs(rho) - thresh;
                next = mag > 0.0 ? std::copysign(mag, rho) / ajj : 0.0;
            }
            const double change = next - phi[j];
            if (change != 0.0) {
                q += g.a.col(j) * change;
                phi[j] = next;
                max_change = std::max(max_change, std::abs(change));
            }
        }
        if (objective_trace) objective_trace->push_back(g.objective(phi, 1.0, weight));
        if (max_change < settings.tolerance) {
            converged = true;
            break;
        }
    }
    return make_fit(x, y, std::move(phi), 1.0, weight, converged, sweeps);
}

double prox_bridge(double v, double c, double gamma) {
    if (c < 0.0) throw ConfigError("prox_bridge: negative penalty");
    if (c == 0.0 || v == 0.0) return c == 0.0 ? v : 0.0;
    const double av = std::abs(v);
    if (gamma == 1.0) {
        const double mag = av - c;
        return mag > 0.0 ? std::copysign(mag, v) : 0.0;
    }
    if (gamma == 2.0) return v / (1.0 + 2.0 * c);

    const auto objective = [&](double t) { return 0.5 * (t - av) * (t - av) + c * std::pow(t, gamma); };
    const auto bisect = [&](double lo, double hi) {
        // root of psi(t) = t + c*gamma*t^(gamma-1) - av on an increasing branch
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double val = mid + c * gamma * std::pow(mid, gamma - 1.0) - av;
            (val < 0.0 ? lo : hi) = mid;
            if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
        }
        return 0.5 * (lo + hi);
    };

    if (gamma > 1.0) {
        // psi is strictly increasing from 0 to av on [0, av]; unique root.
        const double t = bisect(0.0, av);
        return std::copysign(t, v);
    }

    // gamma < 1: psi dips to a minimum at t_bar then rises; the outer root is
    // a local minimum of the scalar objective, compared against t = 0.
    const double t_bar = std::pow(c * gamma * (1.0 - gamma), 1.0 / (2.0 - gamma));
    const double psi_min = t_bar + c * gamma * std::pow(t_bar, gamma - 1.0);
    if (psi_min >= av) return 0.0;
    const double t = bisect(t_bar, av);
    return objective(t) < objective(0.0) ? std::copysign(t, v) : 0.0;
}

SegmentFit proximal_gradient_fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
                                 const Eigen::Ref<const Eigen::VectorXd>& y, double gamma,
                                 double weight, const SolverSettings& settings,
                                 const Eigen::VectorXd& start,
                                 std::vector<double>* objective_trace) {
    check_shapes(x, y, &start);
    settings.validate();
    const long p = x.cols();
    const Gram g = make_gram(x, y);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.a, Eigen::EigenvaluesOnly);
    const double lip = 2.0 * std::max(es.eigenvalues().maxCoeff(), 0.0);
    double step = lip > 0.0 ? 1.0 / lip : 1.0;

    Eigen::VectorXd phi = start;
    double fcur = phi.dot(g.a * phi) - 2.0 * g.b.dot(phi) + g.yty;
    if (objective_trace)
        objective_trace->push_back(fcur + weight * bridge_penalty(phi, gamma));
    bool converged = false;
    long iters = 0;
    while (iters < settings.max_iterations) {
        ++iters;
        const Eigen::VectorXd grad = 2.0 * (g.a * phi - g.b);
        Eigen::VectorXd next(p);
        double fnext = 0.0;
        for (;;) {
            const Eigen::VectorXd v = phi - step * grad;
            for (long j = 0; j < p; ++j) next[j] = prox_bridge(v[j], step * weight, gamma);
            fnext = next.dot(g.a * next) - 2.0 * g.b.dot(next) + g.yty;
            const Eigen::VectorXd d = next - phi;
            const double bound = fcur + grad.dot(d) + d.squaredNorm() / (2.0 * step);
            if (fnext <= bound + 1e-14 * std::max(1.0, std::abs(bound))) break;
            step *= settings.step_shrink;
            if (step < 1e-300) break;
        }
        const double max_change = (next - phi).cwiseAbs().maxCoeff();
        phi = std::move(next);
        fcur = fnext;
        if (objective_trace)
            objective_trace->push_back(fcur + weight * bridge_penalty(phi, gamma));
        if (max_change < settings.tolerance) {
            converged = true;
            break;
        }
    }
    return make_fit(x, y, std::move(phi), gamma, weight, converged, iters);
}

SegmentFit penalized_fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& y, double gamma,
                         double weight, const SolverSettings& settings,
                         std::vector<double>* objective_trace) {
    check_shapes(x, y, nullptr);
    settings.validate();
    if (!(gamma > 0.0)) throw ConfigError("penalized_fit: gamma must be positive");
    if (!(weight >= 0.0)) throw ConfigError("penalized_fit: weight must be nonnegative");

    SegmentFit best;
    if (weight == 0.0) {
        best = ols_fit(x, y);
    } else if (gamma == 2.0) {
        best = ridge_closed_form(x, y, weight);
    } else if (gamma == 1.0) {
        best = lasso_cd_fit(x, y, weight, settings, objective_trace);
    } else if (gamma > 1.0) {
        best = proximal_gradient_fit(x, y, gamma, weight, settings, ols_fit(x, y).phi_hat,
                                     objective_trace);
    } else {
        // Non-convex bridge: restart the local descent from zero, the OLS
        // point, and deterministic perturbations of it; keep the best local
        // stationary point.
        const Eigen::VectorXd ols_phi = ols_fit(x, y).phi_hat;
        const long p = x.cols();
        std::vector<Eigen::VectorXd> starts = {Eigen::VectorXd::Zero(p), ols_phi};
        SplitMix64 rng(0x6272696467656669ULL); // fixed stream: identical inputs, identical runs
        while (static_cast<int>(starts.size()) < settings.multistart_count) {
            Eigen::VectorXd s(p);
            for (long j = 0; j < p; ++j)
                s[j] = ols_phi[j] * (0.25 + 1.5 * rng.next_double()) +
                       (rng.next_double() - 0.5);
            starts.push_back(std::move(s));
        }
        bool have = false;
        for (const auto& s : starts) {
            SegmentFit fit = proximal_gradient_fit(x, y, gamma, weight, settings, s,
                                                   objective_trace);
            if (!have || fit.objective < best.objective) {
                best = std::move(fit);
                have = true;
            }
        }
    }

    // Contract: the returned point scores no worse than the zero vector or
    // the OLS solution (strict improvement only, so a converged solver result
    // is kept on ties).
    const long p = x.cols();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(p);
    const double at_zero = y.squaredNorm();
    if (at_zero < best.objective)
        best = make_fit(x, y, zero, gamma, weight, best.converged, best.iterations);
    SegmentFit ols = ols_fit(x, y);
    const double at_ols = ols.rss + weight * bridge_penalty(ols.phi_hat, gamma);
    if (at_ols < best.objective)
        best = make_fit(x, y, std::move(ols.phi_hat), gamma, weight, best.converged,
                        best.iterations);
    return best;
}

SegmentFit bridge_fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
                      const Eigen::Ref<const Eigen::VectorXd>& y, const PenaltySpec& spec,
                      const SolverSettings& settings, std::vector<double>* objective_trace) {
    spec.validate();
    check_shapes(x, y, nullptr);
    const long m = x.rows();
    const double weight = spec.lambda(m) / static_cast<double>(m);
    return penalized_fit(x, y, spec.gamma, weight, settings, objective_trace);
}

std::pair<SegmentFit, double> segment_cost(const Eigen::Ref<const Eigen::MatrixXd>& x,
                                           const Eigen::Ref<const Eigen::VectorXd>& y,
                                           const PenaltySpec& spec,
                                           const SolverSettings& settings) {
    SegmentFit fit = bridge_fit(x, y, spec, settings);
    const double value = fit.objective;
    return {std::move(fit), value};
}

} // namespace cplab
