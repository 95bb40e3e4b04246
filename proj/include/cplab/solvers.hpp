#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cplab/types.hpp"

namespace cplab {

struct SolverSettings {
    long max_iterations = 10000;
    double tolerance = 1e-10;  // stop when max coefficient change falls below
    int multistart_count = 8;  // local restarts for the non-convex gamma < 1 case
    double step_shrink = 0.5;  // backtracking factor for proximal gradient

    void validate() const;
};

// sum_u |phi_u|^gamma
double bridge_penalty(const Eigen::VectorXd& phi, double gamma);

// sum_i (y_i - x_i'phi)^2 + (lambda/m) * sum_u |phi_u|^gamma,
// lambda = scale_c * sqrt(m), m = row count.
double segment_objective(const Eigen::Ref<const Eigen::MatrixXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& y,
                         const Eigen::VectorXd& phi, const PenaltySpec& spec);

// Unpenalized least squares; minimum-norm solution under rank deficiency.
SegmentFit ols_fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);

// Minimizes ||y - X phi||^2 + weight * sum_u |phi_u|^gamma for an absolute
// penalty weight.  Dispatch: weight 0 -> OLS; gamma 2 -> closed-form ridge;
// gamma 1 -> coordinate descent; gamma > 1 -> proximal gradient; gamma < 1 ->
// multistart proximal descent (local stationarity only).  The returned point
// never scores worse than the zero vector or the OLS solution.
SegmentFit penalized_fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& y, double gamma,
                         double weight, const SolverSettings& settings,
                         std::vector<double>* objective_trace = nullptr);

// Spec-scaled front end: weight = lambda/m with lambda = scale_c * sqrt(m).
SegmentFit bridge_fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
                      const Eigen::Ref<const Eigen::VectorXd>& y, const PenaltySpec& spec,
                      const SolverSettings& settings,
                      std::vector<double>* objective_trace = nullptr);

// bridge_fit plus its objective value.
std::pair<SegmentFit, double> segment_cost(const Eigen::Ref<const Eigen::MatrixXd>& x,
                                           const Eigen::Ref<const Eigen::VectorXd>& y,
                                           const PenaltySpec& spec,
                                           const SolverSettings& settings);

// Individual routes, exposed so the closed forms can be cross-checked.
SegmentFit ridge_closed_form(const Eigen::Ref<const Eigen::MatrixXd>& x,
                             const Eigen::Ref<const Eigen::VectorXd>& y, double weight);

SegmentFit lasso_cd_fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y, double weight,
                        const SolverSettings& settings,
                        std::vector<double>* objective_trace = nullptr);

SegmentFit proximal_gradient_fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
                                 const Eigen::Ref<const Eigen::VectorXd>& y, double gamma,
                                 double weight, const SolverSettings& settings,
                                 const Eigen::VectorXd& start,
                                 std::vector<double>* objective_trace = nullptr);

// argmin_t (t - v)^2 / 2 + c * |t|^gamma, the scalar proximal step used by
// the gradient routes.  Exact for gamma in {1, 2}; solved numerically
// otherwise (for gamma < 1 the better of t = 0 and the outer stationary
// point is returned).
double prox_bridge(double v, double c, double gamma);

} // namespace cplab
