#pragma once

// Convex QCQP front end. A ConvexSubproblem is a real-variable problem
//
//   minimize    x'P0 x + q0'x + r0
//   subject to  tagged constraints (quadratic <= 0, linear >=, ball, x_i <= 0)
//
// which solve() rewrites as a second-order cone program and hands to a
// backend (the interior-point solver by default). Quadratic forms follow the
// convention f(x) = x'P x + q'x + r, no factor 1/2.

#include "rsswipt/solver/cone_program.hpp"

#include <Eigen/Eigenvalues>

#include <functional>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rsswipt::solver {

struct QuadraticForm {
  Mat P;
  Vec q;
  double r = 0.0;

  static QuadraticForm zero(Eigen::Index n) { return {Mat::Zero(n, n), Vec::Zero(n), 0.0}; }
  double operator()(const Vec& x) const { return x.dot(P * x) + q.dot(x) + r; }
};

/// f(x) <= 0 with f convex quadratic.
struct QuadraticConstraint {
  std::string tag;
  QuadraticForm f;
};

/// a'x >= bound.
struct LinearConstraint {
  std::string tag;
  Vec a;
  double bound = 0.0;
};

/// ||x_I||_2 <= radius.
struct BallConstraint {
  std::string tag;
  std::vector<Eigen::Index> indices;
  double radius = 1.0;
};

/// x_i <= 0 for every listed index.
struct NonPositiveConstraint {
  std::string tag;
  std::vector<Eigen::Index> indices;
};

using Constraint = std::variant<QuadraticConstraint, LinearConstraint, BallConstraint, NonPositiveConstraint>;

struct ConvexSubproblem {
  Eigen::Index num_variables = 0;
  QuadraticForm objective;
  std::vector<Constraint> constraints;
};

struct SolverResult {
  Status status = Status::numerical_failure;
  Vec solution;
  double objective_value = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  std::string diagnostic;
};

class InvalidProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Any solver honouring the solve() contract can be plugged in here, e.g. an
/// external solver used as a cross-check in tests.
using Backend = std::function<SolverResult(const ConvexSubproblem&, const Tolerances&)>;

namespace detail {

// Returns L with P = L L' (columns for eigenvalues above the rank cutoff).
// Throws InvalidProblem if P is not symmetric positive semidefinite.
inline Mat psd_factor(const Mat& P, const std::string& what) {
  const Eigen::Index n = P.rows();
  if (P.cols() != n) throw InvalidProblem(what + ": matrix is not square");
  if (n == 0) return Mat(0, 0);
  const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) throw InvalidProblem(what + ": matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (P + P.transpose()));
  const Vec& lam = eig.eigenvalues();
  const double lam_max = std::max(0.0, lam.maxCoeff());
  if (lam.minCoeff() < -1e-10 * std::max(1.0, lam_max))
    throw InvalidProblem(what + ": matrix is not positive semidefinite (min eigenvalue " +
                         std::to_string(lam.minCoeff()) + ")");
  const double cutoff = 1e-13 * std::max(1.0, lam_max);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (lam(i) > cutoff) keep.push_back(i);
  Mat L(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    L.col(static_cast<Eigen::Index>(j)) = eig.eigenvectors().col(keep[j]) * std::sqrt(lam(keep[j]));
  return L;
}

struct RowBuilder {
  Eigen::Index n;
  std::vector<Vec> lin_g;
  std::vector<double> lin_h;
  std::vector<std::pair<Mat, Vec>> socs;  // (G block, h block)

  // u'x + v <= 0 as a nonnegative slack row.
  void linear_leq(const Vec& u, double v) {
    lin_g.push_back(u);
    lin_h.push_back(-v);
  }

  // ||L'x||^2 <= -(u'x + v), i.e. (1 - u'x - v, 2 L'x, -1 - u'x - v) in Q.
  void quadratic_leq(const Mat& L, const Vec& u, double v) {
    const Eigen::Index k = L.cols();
    Mat Gb = Mat::Zero(k + 2, n);
    Vec hb = Vec::Zero(k + 2);
    Gb.row(0) = u.transpose();
    hb(0) = 1.0 - v;
    Gb.middleRows(1, k) = -2.0 * L.transpose();
    Gb.row(k + 1) = u.transpose();
    hb(k + 1) = -1.0 - v;
    socs.emplace_back(std::move(Gb), std::move(hb));
  }

  ConeProgram finish(const Vec& c) const {
    ConeProgram cp;
    cp.c = c;
    cp.dims.nonneg = static_cast<int>(lin_g.size());
    Eigen::Index m = cp.dims.nonneg;
    for (const auto& [gb, hb] : socs) {
      cp.dims.soc.push_back(static_cast<int>(gb.rows()));
      m += gb.rows();
    }
    cp.G = Mat::Zero(m, n);
    cp.h = Vec::Zero(m);
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < lin_g.size(); ++i, ++row) {
      cp.G.row(row) = lin_g[i].transpose();
      cp.h(row) = lin_h[i];
    }
    for (const auto& [gb, hb] : socs) {
      cp.G.middleRows(row, gb.rows()) = gb;
      cp.h.segment(row, hb.size()) = hb;
      row += gb.rows();
    }
    cp.A = Mat(0, n);
    cp.b = Vec(0);
    return cp;
  }
};

}  // namespace detail

/// Checks shapes and convexity; throws InvalidProblem on violation.
inline void check_problem(const ConvexSubproblem& prob) {
  const Eigen::Index n = prob.num_variables;
  auto check_form = [&](const QuadraticForm& f, const std::string& what) {
    if (f.P.rows() != n || f.P.cols() != n || f.q.size() != n) throw InvalidProblem(what + ": dimension mismatch");
    if (!f.P.allFinite() || !f.q.allFinite() || !std::isfinite(f.r)) throw InvalidProblem(what + ": non-finite data");
    detail::psd_factor(f.P, what);
  };
  check_form(prob.objective, "objective");
  for (const auto& con : prob.constraints) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, QuadraticConstraint>) {
            check_form(c.f, "constraint '" + c.tag + "'");
          } else if constexpr (std::is_same_v<T, LinearConstraint>) {
            if (c.a.size() != n) throw InvalidProblem("constraint '" + c.tag + "': dimension mismatch");
          } else {
            for (auto i : c.indices)
              if (i < 0 || i >= n) throw InvalidProblem("constraint '" + c.tag + "': index out of range");
            if constexpr (std::is_same_v<T, BallConstraint>)
              if (!(c.radius >= 0.0)) throw InvalidProblem("constraint '" + c.tag + "': negative radius");
          }
        },
        con);
  }
}

/// Second-order cone reformulation. The variable vector is x, followed by the
/// objective epigraph variable when the objective has a quadratic part. The
/// objective is divided by `objective_scale` so its data are O(1).
struct SocpReformulation {
  ConeProgram program;
  bool has_epigraph = false;
  double objective_scale = 1.0;
};

inline SocpReformulation to_socp(const ConvexSubproblem& prob) {
  const Eigen::Index n = prob.num_variables;
  SocpReformulation out;
  const auto& obj = prob.objective;
  out.objective_scale = std::max({1.0, obj.P.cwiseAbs().maxCoeff(), obj.q.cwiseAbs().maxCoeff()});
  const Mat L0 = detail::psd_factor(obj.P / out.objective_scale, "objective");
  out.has_epigraph = L0.cols() > 0;
  const Eigen::Index nv = n + (out.has_epigraph ? 1 : 0);

  detail::RowBuilder rows{nv, {}, {}, {}};
  auto extend = [&](const Vec& v) {
    Vec e = Vec::Zero(nv);
    e.head(n) = v;
    return e;
  };
  auto extend_rows = [&](const Mat& L) {
    Mat e = Mat::Zero(nv, L.cols());
    e.topRows(n) = L;
    return e;
  };

  Vec c = Vec::Zero(nv);
  if (out.has_epigraph) {
    // x'P x + q'x + r - t <= 0 (scaled), with t the last variable.
    Vec u = extend(obj.q / out.objective_scale);
    u(n) = -1.0;
    rows.quadratic_leq(extend_rows(L0), u, obj.r / out.objective_scale);
    c(n) = 1.0;
  } else {
    c.head(n) = obj.q / out.objective_scale;
  }

  for (const auto& con : prob.constraints) {
    std::visit(
        [&](const auto& cn) {
          using T = std::decay_t<decltype(cn)>;
          if constexpr (std::is_same_v<T, QuadraticConstraint>) {
            const double s = std::max({1.0, cn.f.P.cwiseAbs().maxCoeff(), cn.f.q.cwiseAbs().maxCoeff()});
            const Mat L = detail::psd_factor(cn.f.P / s, "constraint '" + cn.tag + "'");
            if (L.cols() == 0) rows.linear_leq(extend(cn.f.q / s), cn.f.r / s);
            else rows.quadratic_leq(extend_rows(L), extend(cn.f.q / s), cn.f.r / s);
          } else if constexpr (std::is_same_v<T, LinearConstraint>) {
            rows.linear_leq(extend(-cn.a), cn.bound);
          } else if constexpr (std::is_same_v<T, BallConstraint>) {
            const auto k = static_cast<Eigen::Index>(cn.indices.size());
            Mat Gb = Mat::Zero(k + 1, nv);
            Vec hb = Vec::Zero(k + 1);
            hb(0) = cn.radius;
            for (Eigen::Index i = 0; i < k; ++i) Gb(i + 1, cn.indices[static_cast<std::size_t>(i)]) = -1.0;
            rows.socs.emplace_back(std::move(Gb), std::move(hb));
          } else {
            for (auto i : cn.indices) {
              Vec u = Vec::Zero(nv);
              u(i) = 1.0;
              rows.linear_leq(u, 0.0);
            }
          }
        },
        con);
  }
  out.program = rows.finish(c);
  return out;
}

/// Reference backend: interior-point solve of the SOCP reformulation.
inline SolverResult interior_point_backend(const ConvexSubproblem& prob, const Tolerances& tol) {
  const auto socp = to_socp(prob);
  const auto sol = solve_cone_program(socp.program, tol);
  SolverResult r;
  r.status = sol.status;
  r.iterations = sol.iterations;
  r.diagnostic = sol.diagnostic;
  r.primal_residual = sol.primal_residual;
  r.dual_residual = sol.dual_residual;
  r.gap = sol.gap * socp.objective_scale;
  if (sol.x.size() >= prob.num_variables) {
    r.solution = sol.x.head(prob.num_variables);
    r.objective_value = prob.objective(r.solution);
  }
  return r;
}

/// Checks the problem (throws InvalidProblem) and solves it with `backend`.
inline SolverResult solve(const ConvexSubproblem& prob, const Tolerances& tol = {},
                          const Backend& backend = interior_point_backend) {
  check_problem(prob);
  return backend(prob, tol);
}

/// Largest violation of any constraint at x (0 when feasible).
inline double max_violation(const ConvexSubproblem& prob, const Vec& x) {
  double v = 0.0;
  for (const auto& con : prob.constraints) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, QuadraticConstraint>) {
            v = std::max(v, c.f(x));
          } else if constexpr (std::is_same_v<T, LinearConstraint>) {
            v = std::max(v, c.bound - c.a.dot(x));
          } else if constexpr (std::is_same_v<T, BallConstraint>) {
            double s = 0.0;
            for (auto i : c.indices) s += x(i) * x(i);
            v = std::max(v, std::sqrt(s) - c.radius);
          } else {
            for (auto i : c.indices) v = std::max(v, x(i));
          }
        },
        con);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Plain-text dump, for cross-checking assembled problems against external
// solvers. Format (whitespace separated, one record per line group):
//
//   qcqp <n>
//   objective
//   P <n*n values, row-major>
//   q <n values>
//   r <value>
//   quadratic <tag>      followed by P / q / r lines as above
//   linear <tag>         then   a <n values>   and   bound <value>
//   ball <tag> <radius> <k> <k indices>
//   nonpositive <tag> <k> <k indices>
//   end
//
// Tags never contain whitespace. Values are printed with 17 significant digits.

namespace detail {

inline void write_form(std::ostream& os, const QuadraticForm& f) {
  os << "P";
  for (Eigen::Index i = 0; i < f.P.rows(); ++i)
    for (Eigen::Index j = 0; j < f.P.cols(); ++j) os << ' ' << f.P(i, j);
  os << "\nq";
  for (Eigen::Index i = 0; i < f.q.size(); ++i) os << ' ' << f.q(i);
  os << "\nr " << f.r << "\n";
}

inline QuadraticForm read_form(std::istream& is, Eigen::Index n) {
  QuadraticForm f = QuadraticForm::zero(n);
  std::string key;
  is >> key;
  if (key != "P") throw std::runtime_error("qcqp dump: expected P");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) is >> f.P(i, j);
  is >> key;
  if (key != "q") throw std::runtime_error("qcqp dump: expected q");
  for (Eigen::Index i = 0; i < n; ++i) is >> f.q(i);
  is >> key;
  if (key != "r") throw std::runtime_error("qcqp dump: expected r");
  is >> f.r;
  return f;
}

}  // namespace detail

inline void dump(std::ostream& os, const ConvexSubproblem& prob) {
  const auto old_precision = os.precision(17);
  os << "qcqp " << prob.num_variables << "\nobjective\n";
  detail::write_form(os, prob.objective);
  for (const auto& con : prob.constraints) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, QuadraticConstraint>) {
            os << "quadratic " << c.tag << "\n";
            detail::write_form(os, c.f);
          } else if constexpr (std::is_same_v<T, LinearConstraint>) {
            os << "linear " << c.tag << "\na";
            for (Eigen::Index i = 0; i < c.a.size(); ++i) os << ' ' << c.a(i);
            os << "\nbound " << c.bound << "\n";
          } else if constexpr (std::is_same_v<T, BallConstraint>) {
            os << "ball " << c.tag << ' ' << c.radius << ' ' << c.indices.size();
            for (auto i : c.indices) os << ' ' << i;
            os << "\n";
          } else {
            os << "nonpositive " << c.tag << ' ' << c.indices.size();
            for (auto i : c.indices) os << ' ' << i;
            os << "\n";
          }
        },
        con);
  }
  os << "end\n";
  os.precision(old_precision);
}

inline ConvexSubproblem read_dump(std::istream& is) {
  std::string key;
  ConvexSubproblem prob;
  is >> key >> prob.num_variables;
  if (key != "qcqp") throw std::runtime_error("qcqp dump: bad header");
  const Eigen::Index n = prob.num_variables;
  is >> key;
  if (key != "objective") throw std::runtime_error("qcqp dump: expected objective");
  prob.objective = detail::read_form(is, n);
  while (is >> key && key != "end") {
    std::string tag;
    is >> tag;
    if (key == "quadratic") {
      prob.constraints.emplace_back(QuadraticConstraint{tag, detail::read_form(is, n)});
    } else if (key == "linear") {
      LinearConstraint c{tag, Vec::Zero(n), 0.0};
      is >> key;
      for (Eigen::Index i = 0; i < n; ++i) is >> c.a(i);
      is >> key >> c.bound;
      prob.constraints.emplace_back(std::move(c));
    } else if (key == "ball" || key == "nonpositive") {
      double radius = 0.0;
      if (key == "ball") is >> radius;
      std::size_t k = 0;
      is >> k;
      std::vector<Eigen::Index> idx(k);
      for (auto& i : idx) is >> i;
      if (key == "ball") prob.constraints.emplace_back(BallConstraint{tag, std::move(idx), radius});
      else prob.constraints.emplace_back(NonPositiveConstraint{tag, std::move(idx)});
    } else {
      throw std::runtime_error("qcqp dump: unknown record '" + key + "'");
    }
  }
  if (!is && key != "end") throw std::runtime_error("qcqp dump: truncated");
  return prob;
}

}  // namespace rsswipt::solver
