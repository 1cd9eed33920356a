#include "mselab/solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "mselab/error.hpp"
#include "mselab/linear_solver.hpp"
#include "mselab/residual.hpp"

namespace mselab {

BoundaryData::BoundaryData(const Grid& grid) : support_(Gamma::all(grid)), values_(grid) {}

BoundaryData::BoundaryData(const Gamma& support, ScalarField values)
    : support_(support), values_(std::move(values)) {
  const Grid& g = values_.grid();
  require_same_grid(g, support.grid(), "boundary data");
  for (int j = 0; j < g.n(); ++j)
    for (int i = 0; i < g.n(); ++i) {
      double v = values_(i, j);
      if (!std::isfinite(v)) throw InvalidArgument("boundary data not finite");
      if (g.is_interior(i, j)) {
        values_(i, j) = 0.0;
      } else if (v != 0.0 && !support.in_support(i, j)) {
        std::ostringstream os;
        os << "boundary data nonzero at node (" << i << ", " << j << ") outside the support of gamma '"
           << support.name() << "'";
        throw InvalidArgument(os.str());
      }
    }
}

BoundaryData BoundaryData::from_expr(const Gamma& support, const Expr& f) {
  return from_function(support, [&](double x1, double x2) { return f.eval(x1, x2); });
}

double BoundaryData::smallness() const { return values_.max_abs(); }

BoundaryData BoundaryData::scaled(double a) const { return BoundaryData(support_, a * values_); }

BoundaryData operator+(const BoundaryData& a, const BoundaryData& b) {
  require_same_grid(a.grid(), b.grid(), "boundary data sum");
  const Gamma& sup = a.support().is_full() ? a.support() : b.support();
  if (!a.support().is_full() && !b.support().is_full() && a.support().name() != b.support().name())
    return BoundaryData(Gamma::all(a.grid()), a.values() + b.values());
  return BoundaryData(sup, a.values() + b.values());
}

namespace {

// Full residual: F − s at interior nodes, u − f on the boundary.
Eigen::VectorXd full_residual(const MseResidual& R, const ScalarField& u, const BoundaryData& f,
                              const std::optional<ScalarField>& src) {
  const Grid& g = u.grid();
  Eigen::VectorXd r(g.size());
  for (int j = 0; j < g.n(); ++j)
    for (int i = 0; i < g.n(); ++i) {
      int k = g.index(i, j);
      if (g.is_boundary(i, j)) {
        r[k] = u[k] - f.values()[k];
      } else {
        r[k] = R.local(k, gather(u, i, j));
        if (src) r[k] -= (*src)[k];
      }
    }
  return r;
}

SparseMatrix fd_jacobian(const MseResidual& R, const ScalarField& u, double delta) {
  const Grid& g = u.grid();
  const int N = g.n();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(9) * g.size());
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      int k = g.index(i, j);
      if (g.is_boundary(i, j)) {
        trip.emplace_back(k, k, 1.0);
        continue;
      }
      Stencil s = gather(u, i, j);
      CJet base = R.jet(k, s[1][1]);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          Stencil sp = s, sm = s;
          sp[a][b] += delta;
          sm[a][b] -= delta;
          double rp, rm;
          if (a == 1 && b == 1) {
            rp = R.local(k, sp, R.jet(k, sp[1][1]));
            rm = R.local(k, sm, R.jet(k, sm[1][1]));
          } else {
            rp = R.local(k, sp, base);
            rm = R.local(k, sm, base);
          }
          double d = (rp - rm) / (2 * delta);
          if (d != 0.0) trip.emplace_back(k, g.index(i + a - 1, j + b - 1), d);
        }
    }
  SparseMatrix J(g.size(), g.size());
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

}  // namespace

SolveResult solve_bvp(const Metric& metric, const BoundaryData& f, const SolverOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  const Grid& g = f.grid();
  if (!(opts.newton_tol > 0.0)) throw InvalidArgument("newton_tol must be positive");
  if (opts.max_newton_iters < 1) throw InvalidArgument("max_newton_iters must be >= 1");
  if (!(f.smallness() < opts.delta_cap)) {
    std::ostringstream os;
    os << "boundary data sup-norm " << f.smallness() << " not below delta_cap " << opts.delta_cap;
    throw InvalidArgument(os.str());
  }
  if (opts.source) require_same_grid(g, opts.source->grid(), "source");
  MseResidual R(metric, g);

  ScalarField u(g);
  if (opts.initial_guess) {
    require_same_grid(g, opts.initial_guess->grid(), "initial guess");
    u = *opts.initial_guess;
  }
  for (int k : g.boundary_nodes()) u[k] = f.values()[k];

  SolveResult res{u, 0, 0.0, {}, 0.0};
  Eigen::VectorXd r = full_residual(R, u, f, opts.source);
  double rn = r.lpNorm<Eigen::Infinity>();
  res.history.push_back(rn);
  while (rn > opts.newton_tol) {
    if (res.iterations >= opts.max_newton_iters) {
      std::ostringstream os;
      os << "Newton did not converge in " << opts.max_newton_iters << " iterations; last residual " << rn;
      throw NoConvergence(os.str(), rn);
    }
    SparseMatrix J = fd_jacobian(R, u, opts.fd_perturbation);
    Eigen::VectorXd step = LinearSolver(J, opts.direct_limit).solve(-r);
    double alpha = 1.0;
    bool accepted = false;
    for (int hcount = 0; hcount <= opts.max_halvings; ++hcount) {
      ScalarField trial(g, u.values() + alpha * step);
      try {
        Eigen::VectorXd rt = full_residual(R, trial, f, opts.source);
        double rtn = rt.lpNorm<Eigen::Infinity>();
        if (std::isfinite(rtn) && rtn < rn) {
          u = std::move(trial);
          r = std::move(rt);
          rn = rtn;
          accepted = true;
          break;
        }
      } catch (const DomainEscape&) {
        // shorter step
      }
      alpha *= opts.damping;
    }
    if (!accepted) {
      std::ostringstream os;
      os << "Newton step not accepted after " << opts.max_halvings << " halvings; last residual " << rn;
      throw NoConvergence(os.str(), rn);
    }
    ++res.iterations;
    res.history.push_back(rn);
  }
  res.u = std::move(u);
  res.residual = rn;
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

NewtonPhase newton_phase(const std::vector<double>& history) {
  NewtonPhase p;
  for (std::size_t k = 1; k < history.size(); ++k)
    if (history[k - 1] > 0.0) p.ratios.push_back(history[k] / history[k - 1]);
  for (std::size_t k = 1; k < p.ratios.size(); ++k)
    if (p.ratios[k] <= 0.1 * p.ratios[k - 1]) p.quadratic = true;
  return p;
}

}  // namespace mselab
