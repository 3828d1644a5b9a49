// SPDX-License-Identifier: Apache-2.0
#include "dce/gp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "dce/error.hpp"

namespace dce::gp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double Monomial::eval(std::span<const double> x) const {
  double v = coef;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] != 0.0) v *= std::pow(x[i], exponents[i]);
  }
  return v;
}

Posynomial::Posynomial(std::vector<Monomial> terms) : terms_(std::move(terms)) {}

void Posynomial::add(Monomial term) { terms_.push_back(std::move(term)); }

double Posynomial::eval(std::span<const double> x) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.eval(x);
  return v;
}

double Posynomial::log_eval(const VectorXd& y, VectorXd* grad, MatrixXd* hess) const {
  const auto n = y.size();
  const auto k = static_cast<Eigen::Index>(terms_.size());
  VectorXd a(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Monomial& m = terms_[static_cast<std::size_t>(j)];
    double v = std::log(m.coef);
    for (Eigen::Index i = 0; i < n; ++i) v += m.exponents[static_cast<std::size_t>(i)] * y(i);
    a(j) = v;
  }
  const double top = a.maxCoeff();
  VectorXd w = (a.array() - top).exp();
  const double sum = w.sum();
  w /= sum;
  if (grad || hess) {
    MatrixXd e(k, n);
    for (Eigen::Index j = 0; j < k; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        e(j, i) = terms_[static_cast<std::size_t>(j)].exponents[static_cast<std::size_t>(i)];
    const VectorXd g = e.transpose() * w;
    if (grad) *grad = g;
    if (hess) *hess = e.transpose() * w.asDiagonal() * e - g * g.transpose();
  }
  return top + std::log(sum);
}

Posynomial Posynomial::divided_by(const Monomial& m) const {
  std::vector<Monomial> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial q{t.coef / m.coef, t.exponents};
    for (std::size_t i = 0; i < q.exponents.size(); ++i) q.exponents[i] -= m.exponents[i];
    out.push_back(std::move(q));
  }
  return Posynomial(std::move(out));
}

Posynomial Posynomial::scaled(double factor) const {
  std::vector<Monomial> out = terms_;
  for (auto& t : out) t.coef *= factor;
  return Posynomial(std::move(out));
}

Monomial monomial_approximation(const Posynomial& p, std::span<const double> x0) {
  const std::size_t n = x0.size();
  Monomial m{0.0, std::vector<double>(n, 0.0)};
  double total = 0.0;
  for (const auto& t : p.terms()) {
    const double v = t.eval(x0);
    total += v;
    for (std::size_t i = 0; i < n; ++i) m.exponents[i] += v * t.exponents[i];
  }
  double log_coef = std::log(total);
  for (std::size_t i = 0; i < n; ++i) {
    m.exponents[i] /= total;
    log_coef -= m.exponents[i] * std::log(x0[i]);
  }
  m.coef = std::exp(log_coef);
  return m;
}

namespace {

// Smooth convex function of the log-variables: value, optional gradient/Hessian.
using Smooth = std::function<double(const VectorXd&, VectorXd*, MatrixXd*)>;

struct BarrierOutcome {
  VectorXd x;
  double weight = 1.0;        // barrier weight s at exit
  double stationarity = 0.0;  // KKT residual at exit
  int newton_steps = 0;
  bool converged = false;
  bool stopped_early = false;
};

double max_value(const std::vector<Smooth>& fs, const VectorXd& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& f : fs) worst = std::max(worst, f(x, nullptr, nullptr));
  return worst;
}

// Barrier weight times f0 minus the log-barrier, with derivatives.
double barrier_value(const Smooth& f0, const std::vector<Smooth>& fs, double s, const VectorXd& x,
                     VectorXd* grad, MatrixXd* hess) {
  const auto n = x.size();
  VectorXd g0(n);
  MatrixXd h0(n, n);
  double value = s * f0(x, grad ? &g0 : nullptr, hess ? &h0 : nullptr);
  if (grad) *grad = s * g0;
  if (hess) *hess = s * h0;
  VectorXd gi(n);
  MatrixXd hi(n, n);
  for (const auto& f : fs) {
    const double fi = f(x, grad ? &gi : nullptr, hess ? &hi : nullptr);
    if (!(fi < 0.0)) return std::numeric_limits<double>::infinity();
    const double d = -fi;
    value -= std::log(d);
    if (grad) *grad += gi / d;
    if (hess) *hess += hi / d + gi * gi.transpose() / (d * d);
  }
  return value;
}

// KKT residual with the best nonnegative multipliers on the nearly active set.
// The set is small, so every support is tried.
double kkt_residual(const Smooth& f0, const std::vector<Smooth>& fs, const VectorXd& x) {
  const auto n = x.size();
  VectorXd g0(n);
  f0(x, &g0, nullptr);
  std::vector<VectorXd> grads;
  std::vector<double> slacks;
  double infeasibility = 0.0;
  VectorXd gi(n);
  for (const auto& f : fs) {
    const double fi = f(x, &gi, nullptr);
    infeasibility = std::max(infeasibility, fi);
    if (fi > -1e-6) {
      grads.push_back(gi);
      slacks.push_back(-fi);
    }
  }
  const auto k = grads.size();
  double best = g0.cwiseAbs().maxCoeff();
  if (k == 0 || k > 10) return std::max(best, infeasibility);
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    MatrixXd a(n, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) a.col(static_cast<Eigen::Index>(j)) = grads[idx[j]];
    const VectorXd lambda = a.colPivHouseholderQr().solve(-g0);
    if (!lambda.allFinite() || lambda.minCoeff() < 0.0) continue;
    double residual = (g0 + a * lambda).cwiseAbs().maxCoeff();
    for (std::size_t j = 0; j < idx.size(); ++j)
      residual = std::max(residual, lambda(static_cast<Eigen::Index>(j)) * slacks[idx[j]]);
    best = std::min(best, residual);
  }
  return std::max(best, infeasibility);
}

bool strictly_feasible(const std::vector<Smooth>& fs, const VectorXd& x) {
  if (!x.allFinite()) return false;
  for (const auto& f : fs) {
    if (!(f(x, nullptr, nullptr) < 0.0)) return false;
  }
  return true;
}

BarrierOutcome barrier_minimize(const Smooth& f0, const std::vector<Smooth>& fs, VectorXd x,
                                const Options& options,
                                const std::function<bool(const VectorXd&)>& stop_early = {}) {
  BarrierOutcome out;
  const auto n = x.size();
  const double m = static_cast<double>(fs.size());
  double s = 1.0;
  VectorXd grad(n);
  MatrixXd hess(n, n);
  for (int stage = 0; stage < options.max_stages; ++stage) {
    double previous_decrement = std::numeric_limits<double>::infinity();
    for (int it = 0; it < options.max_newton_per_stage; ++it) {
      const double phi = barrier_value(f0, fs, s, x, &grad, &hess);
      double delta = 1e-12 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff());
      VectorXd step;
      for (int attempt = 0; attempt < 30; ++attempt) {
        MatrixXd reg = hess;
        reg.diagonal().array() += delta;
        Eigen::LDLT<MatrixXd> ldlt(reg);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
          step = ldlt.solve(-grad);
          if (step.allFinite()) break;
        }
        delta *= 10.0;
      }
      const double decrement_sq = -grad.dot(step);
      if (!(decrement_sq > 2e-12)) break;
      // Rounding floor: the decrement no longer shrinks.
      if (decrement_sq < 1e-6 && decrement_sq > 0.5 * previous_decrement) break;
      previous_decrement = decrement_sq;

      double t = 1.0;
      while (t > 1e-14 && !strictly_feasible(fs, x + t * step)) t *= 0.5;
      // Near the centre the barrier value carries too much rounding for an
      // Armijo test at large weights; Newton steps are accepted outright there.
      if (decrement_sq > 1e-3) {
        while (t > 1e-14 &&
               !(barrier_value(f0, fs, s, x + t * step, nullptr, nullptr) <=
                 phi - 0.01 * t * decrement_sq)) {
          t *= 0.5;
        }
      }
      if (t <= 1e-14) break;
      x += t * step;
      ++out.newton_steps;
      if (stop_early && stop_early(x)) {
        out.x = x;
        out.weight = s;
        out.stopped_early = true;
        return out;
      }
    }
    if (m / s < options.gap_tolerance || m == 0.0) {
      out.converged = true;
      break;
    }
    if (stop_early && stop_early(x)) {
      out.stopped_early = true;
      break;
    }
    s *= options.barrier_growth;
  }
  out.x = x;
  out.weight = s;
  out.stationarity = kkt_residual(f0, fs, x);
  return out;
}

}  // namespace

Result solve(const Problem& problem, std::span<const double> start, const Options& options) {
  const int n = problem.num_vars;
  if (static_cast<int>(start.size()) != n) throw std::invalid_argument("gp::solve: bad start size");
  VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    if (!(start[static_cast<std::size_t>(i)] > 0.0))
      throw std::invalid_argument("gp::solve: start must be positive");
    y(i) = std::log(start[static_cast<std::size_t>(i)]);
  }

  std::vector<Smooth> fs;
  fs.reserve(problem.constraints.size());
  for (const auto& c : problem.constraints) {
    fs.emplace_back([&c](const VectorXd& x, VectorXd* g, MatrixXd* h) { return c.log_eval(x, g, h); });
  }
  const Smooth f0 = [&](const VectorXd& x, VectorXd* g, MatrixXd* h) {
    return problem.objective.log_eval(x, g, h);
  };

  int phase_one_steps = 0;
  if (!strictly_feasible(fs, y)) {
    // Phase one: minimize r subject to f_i(y) <= r and r >= -1.
    VectorXd z(n + 1);
    z.head(n) = y;
    z(n) = std::max(0.0, max_value(fs, y)) + 1.0;
    std::vector<Smooth> shifted;
    for (const auto& f : fs) {
      shifted.emplace_back([&f, n](const VectorXd& x, VectorXd* g, MatrixXd* h) {
        VectorXd gi;
        MatrixXd hi;
        const double v = f(x.head(n), g ? &gi : nullptr, h ? &hi : nullptr) - x(n);
        if (g) {
          g->resize(n + 1);
          g->head(n) = gi;
          (*g)(n) = -1.0;
        }
        if (h) {
          h->setZero(n + 1, n + 1);
          h->topLeftCorner(n, n) = hi;
        }
        return v;
      });
    }
    shifted.emplace_back([n](const VectorXd& x, VectorXd* g, MatrixXd* h) {
      if (g) {
        g->setZero(n + 1);
        (*g)(n) = -1.0;
      }
      if (h) h->setZero(n + 1, n + 1);
      return -x(n) - 1.0;
    });
    const Smooth r = [n](const VectorXd& x, VectorXd* g, MatrixXd* h) {
      if (g) {
        g->setZero(n + 1);
        (*g)(n) = 1.0;
      }
      if (h) h->setZero(n + 1, n + 1);
      return x(n);
    };
    Options p1 = options;
    p1.gap_tolerance = 1e-8;
    const auto done = [&](const VectorXd& x) { return max_value(fs, x.head(n)) < -1e-2; };
    const BarrierOutcome one = barrier_minimize(r, shifted, z, p1, done);
    phase_one_steps = one.newton_steps;
    if (!strictly_feasible(fs, one.x.head(n))) {
      throw Error(Errc::infeasible, "gp::solve: no strictly feasible point");
    }
    y = one.x.head(n);
  }

  const BarrierOutcome main = barrier_minimize(f0, fs, y, options);
  Result res;
  res.x.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) res.x[static_cast<std::size_t>(i)] = std::exp(main.x(i));
  res.objective = problem.objective.eval(res.x);
  res.max_constraint = 0.0;
  for (const auto& c : problem.constraints) res.max_constraint = std::max(res.max_constraint, c.eval(res.x));
  res.kkt_residual = main.stationarity;
  res.newton_steps = main.newton_steps + phase_one_steps;
  res.converged = main.converged;
  return res;
}

}  // namespace dce::gp
