// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dce::gp {

/// coef * prod_i x_i^exponents[i], coef > 0.
struct Monomial {
  double coef = 1.0;
  std::vector<double> exponents;

  double eval(std::span<const double> x) const;
};

/// Sum of monomials over a fixed number of positive variables.
class Posynomial {
 public:
  Posynomial() = default;
  explicit Posynomial(std::vector<Monomial> terms);

  void add(Monomial term);
  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  double eval(std::span<const double> x) const;

  /// log of the posynomial as a function of y = log x, with gradient and
  /// Hessian (log-sum-exp of affine functions, hence convex).
  double log_eval(const Eigen::VectorXd& y, Eigen::VectorXd* grad = nullptr,
                  Eigen::MatrixXd* hess = nullptr) const;

  /// Every term divided by `m`.
  Posynomial divided_by(const Monomial& m) const;
  Posynomial scaled(double factor) const;

 private:
  std::vector<Monomial> terms_;
};

/// Best local monomial fit at x0: matches value and every log-derivative.
/// Never exceeds the posynomial anywhere (weighted AM-GM).
Monomial monomial_approximation(const Posynomial& p, std::span<const double> x0);

/// minimize objective(x) subject to constraints[i](x) <= 1, x > 0.
struct Problem {
  int num_vars = 0;
  Posynomial objective;
  std::vector<Posynomial> constraints;
};

struct Options {
  double gap_tolerance = 1e-11;     // m / barrier weight at exit
  double barrier_growth = 20.0;
  int max_newton_per_stage = 200;
  int max_stages = 60;
};

struct Result {
  std::vector<double> x;
  double objective = 0.0;
  double max_constraint = 0.0;    // max_i constraints[i](x)
  double kkt_residual = 0.0;      // max of stationarity and complementarity residuals
  int newton_steps = 0;
  bool converged = false;
};

/// Log-barrier interior-point method on the log-transformed problem.
/// Uses `start` when it is strictly feasible, otherwise runs a phase-one
/// search first. Throws Errc::infeasible when no strictly feasible point
/// exists. When the stage limit is hit the best iterate is returned with
/// `converged == false`.
Result solve(const Problem& problem, std::span<const double> start, const Options& options = {});

}  // namespace dce::gp
