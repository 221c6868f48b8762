#pragma once

// Dense primal-dual interior-point solver for linear cone programs over the
// product of the nonnegative orthant and second-order cones:
//
//   minimize    c'x
//   subject to  G x + s = h,  A x = b,  s in K
//
// with K = R_+^l x Q^{q_1} x ... x Q^{q_N}, Q^q = {(u0, u1) : u0 >= ||u1||}.
//
// The iteration works on the homogeneous self-dual embedding (so infeasibility
// and unboundedness come out as certificates rather than divergence), uses
// Nesterov-Todd scaling and a Mehrotra predictor-corrector. Each Newton system
// is reduced to the (x, y) block and solved with a dense LU plus iterative
// refinement; the problems this library produces have tens of variables.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace rsswipt::solver {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct ConeDims {
  int nonneg = 0;
  std::vector<int> soc;

  int size() const {
    int m = nonneg;
    for (int q : soc) m += q;
    return m;
  }
  int degree() const { return nonneg + static_cast<int>(soc.size()); }
};

struct ConeProgram {
  Vec c;
  Mat G;
  Vec h;
  Mat A;  // may have zero rows
  Vec b;
  ConeDims dims;
};

struct Tolerances {
  double feasibility = 1e-8;
  double gap_absolute = 1e-8;
  double gap_relative = 1e-8;
  int max_iterations = 200;
};

enum class Status { optimal, infeasible, unbounded, max_iterations, numerical_failure };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::max_iterations: return "max_iterations";
    case Status::numerical_failure: return "numerical_failure";
  }
  return "?";
}

struct ConeSolution {
  Status status = Status::numerical_failure;
  Vec x, y, z, s;
  double primal_objective = std::numeric_limits<double>::quiet_NaN();
  double dual_objective = std::numeric_limits<double>::quiet_NaN();
  double primal_residual = std::numeric_limits<double>::infinity();
  double dual_residual = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  int iterations = 0;
  std::string diagnostic;
};

namespace detail {

// Nesterov-Todd scaling W (block diagonal, symmetric). For the orthant block
// W = diag(sqrt(s/z)); for a second-order cone block
// W = eta [w0, w1'; w1, I + w1 w1' / (1 + w0)] with w0^2 - ||w1||^2 = 1.
class NtScaling {
 public:
  NtScaling() = default;

  // Returns false if s or z left the cone interior.
  bool update(const ConeDims& dims, const Vec& s, const Vec& z) {
    dims_ = &dims;
    const int l = dims.nonneg;
    d_.resize(l);
    for (int i = 0; i < l; ++i) {
      if (!(s(i) > 0.0) || !(z(i) > 0.0)) return false;
      d_(i) = std::sqrt(s(i) / z(i));
    }
    blocks_.clear();
    int off = l;
    for (int q : dims.soc) {
      const auto sb = s.segment(off, q);
      const auto zb = z.segment(off, q);
      const double s1 = sb.tail(q - 1).norm();
      const double z1 = zb.tail(q - 1).norm();
      const double s_det = (sb(0) - s1) * (sb(0) + s1);
      const double z_det = (zb(0) - z1) * (zb(0) + z1);
      if (!(sb(0) > 0.0) || !(zb(0) > 0.0) || !(s_det > 0.0) || !(z_det > 0.0)) return false;
      const double s_norm = std::sqrt(s_det);
      const double z_norm = std::sqrt(z_det);
      const Vec s_bar = sb / s_norm;
      const Vec z_bar = zb / z_norm;
      const double gamma = std::sqrt(0.5 * (1.0 + s_bar.dot(z_bar)));
      Block blk;
      blk.eta = std::sqrt(s_norm / z_norm);
      blk.w.resize(q);
      blk.w(0) = (s_bar(0) + z_bar(0)) / (2.0 * gamma);
      blk.w.tail(q - 1) = (s_bar.tail(q - 1) - z_bar.tail(q - 1)) / (2.0 * gamma);
      blocks_.push_back(std::move(blk));
      off += q;
    }
    return true;
  }

  Vec apply(const Vec& v) const { return transform(v, false); }
  Vec apply_inverse(const Vec& v) const { return transform(v, true); }

  // Rows of W^{-1} M, applied column by column.
  Mat apply_inverse_rows(const Mat& m) const {
    Mat out(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.col(j) = apply_inverse(m.col(j));
    return out;
  }

 private:
  struct Block {
    double eta = 1.0;
    Vec w;
  };

  Vec transform(const Vec& v, bool inverse) const {
    Vec out(v.size());
    const int l = dims_->nonneg;
    for (int i = 0; i < l; ++i) out(i) = inverse ? v(i) / d_(i) : v(i) * d_(i);
    int off = l;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const int q = dims_->soc[b];
      const auto& blk = blocks_[b];
      const double w0 = blk.w(0);
      const auto w1 = blk.w.tail(q - 1);
      const auto vb = v.segment(off, q);
      const double v0 = vb(0);
      const auto v1 = vb.tail(q - 1);
      const double w1v1 = w1.dot(v1);
      if (!inverse) {
        out(off) = blk.eta * (w0 * v0 + w1v1);
        out.segment(off + 1, q - 1) = blk.eta * (v1 + (v0 + w1v1 / (1.0 + w0)) * w1);
      } else {
        out(off) = (w0 * v0 - w1v1) / blk.eta;
        out.segment(off + 1, q - 1) = (v1 + (-v0 + w1v1 / (1.0 + w0)) * w1) / blk.eta;
      }
      off += q;
    }
    return out;
  }

  const ConeDims* dims_ = nullptr;
  Vec d_;
  std::vector<Block> blocks_;
};

// Jordan product u o v.
inline Vec jordan_product(const ConeDims& dims, const Vec& u, const Vec& v) {
  Vec out(u.size());
  const int l = dims.nonneg;
  out.head(l) = u.head(l).cwiseProduct(v.head(l));
  int off = l;
  for (int q : dims.soc) {
    out(off) = u.segment(off, q).dot(v.segment(off, q));
    out.segment(off + 1, q - 1) = u(off) * v.segment(off + 1, q - 1) + v(off) * u.segment(off + 1, q - 1);
    off += q;
  }
  return out;
}

// Solves lambda o x = d for x (lambda in the cone interior).
inline Vec jordan_divide(const ConeDims& dims, const Vec& lambda, const Vec& d) {
  Vec out(d.size());
  const int l = dims.nonneg;
  out.head(l) = d.head(l).cwiseQuotient(lambda.head(l));
  int off = l;
  for (int q : dims.soc) {
    const double l0 = lambda(off);
    const auto l1 = lambda.segment(off + 1, q - 1);
    const double det = l0 * l0 - l1.squaredNorm();
    const double x0 = (l0 * d(off) - l1.dot(d.segment(off + 1, q - 1))) / det;
    out(off) = x0;
    out.segment(off + 1, q - 1) = (d.segment(off + 1, q - 1) - x0 * l1) / l0;
    off += q;
  }
  return out;
}

inline Vec identity_element(const ConeDims& dims) {
  Vec e = Vec::Zero(dims.size());
  e.head(dims.nonneg).setOnes();
  int off = dims.nonneg;
  for (int q : dims.soc) {
    e(off) = 1.0;
    off += q;
  }
  return e;
}

// Smallest alpha >= 0 with u + alpha e in K (negative when u is interior).
inline double cone_infeasibility(const ConeDims& dims, const Vec& u) {
  double a = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < dims.nonneg; ++i) a = std::max(a, -u(i));
  int off = dims.nonneg;
  for (int q : dims.soc) {
    a = std::max(a, u.segment(off + 1, q - 1).norm() - u(off));
    off += q;
  }
  return a;
}

// Largest alpha such that x + alpha d stays in K; x must be interior.
inline double max_step(const ConeDims& dims, const Vec& x, const Vec& d) {
  double alpha = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dims.nonneg; ++i)
    if (d(i) < 0.0) alpha = std::min(alpha, -x(i) / d(i));
  int off = dims.nonneg;
  for (int q : dims.soc) {
    const double x0 = x(off), d0 = d(off);
    const auto x1 = x.segment(off + 1, q - 1);
    const auto d1 = d.segment(off + 1, q - 1);
    // f(a) = qa a^2 + 2 qb a + qc, qc > 0.
    const double qa = d0 * d0 - d1.squaredNorm();
    const double qb = x0 * d0 - x1.dot(d1);
    const double qc = x0 * x0 - x1.squaredNorm();
    double root = std::numeric_limits<double>::infinity();
    if (std::abs(qa) <= 1e-14 * (d0 * d0 + d1.squaredNorm())) {
      if (qb < 0.0) root = -qc / (2.0 * qb);
    } else {
      const double disc = qb * qb - qa * qc;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double t = -(qb + std::copysign(sq, qb));
        double r1 = std::numeric_limits<double>::infinity(), r2 = r1;
        if (qa != 0.0) r1 = t / qa;
        if (t != 0.0) r2 = qc / t;
        for (double r : {r1, r2})
          if (r > 0.0) root = std::min(root, r);
      }
    }
    if (d0 < 0.0) root = std::min(root, -x0 / d0);
    alpha = std::min(alpha, root);
    off += q;
  }
  return alpha;
}

}  // namespace detail

/// Solves the cone program. Dimensions are checked; the problem data are
/// otherwise taken as given.
inline ConeSolution solve_cone_program(const ConeProgram& prob, const Tolerances& tol = {}) {
  using namespace detail;
  const Eigen::Index n = prob.c.size();
  const Eigen::Index m = prob.G.rows();
  const Eigen::Index p = prob.A.rows();
  const ConeDims& dims = prob.dims;

  ConeSolution out;
  if (prob.G.cols() != n || prob.h.size() != m || dims.size() != m || (p > 0 && prob.A.cols() != n) ||
      prob.b.size() != p) {
    out.diagnostic = "inconsistent cone program dimensions";
    return out;
  }
  for (int q : dims.soc)
    if (q < 1) {
      out.diagnostic = "second-order cone of dimension < 1";
      return out;
    }

  const Mat& G = prob.G;
  const Mat& A = prob.A;
  const Vec& c = prob.c;
  const Vec& h = prob.h;
  const Vec& b = prob.b;
  const Vec e = identity_element(dims);
  const double degree = dims.degree();

  const double res_x0 = std::max(1.0, c.norm());
  const double res_y0 = std::max(1.0, b.norm());
  const double res_z0 = std::max(1.0, h.norm());

  // Newton systems are solved in the scaled variable zt = W z:
  //   [reg I, A', B'; A, -reg I, 0; B, 0, -I] [x; y; zt] = [rx; ry; W^{-1} rz]
  // with B = W^{-1} G. This avoids forming G' W^{-2} G, whose condition number
  // is the square of B's.
  struct Factored {
    Eigen::PartialPivLU<Mat> lu;
    Mat winv_g;
  } red;
  NtScaling W;
  const double reg = 1e-13;

  auto factor = [&](const NtScaling& scaling) {
    red.winv_g = scaling.apply_inverse_rows(G);
    Mat kkt = Mat::Zero(n + p + m, n + p + m);
    const double scale = std::max(1.0, red.winv_g.cwiseAbs().maxCoeff());
    kkt.topLeftCorner(n, n).diagonal().setConstant(reg * scale);
    if (p > 0) {
      kkt.block(0, n, n, p) = A.transpose();
      kkt.block(n, 0, p, n) = A;
      kkt.block(n, n, p, p).diagonal().setConstant(-reg * scale);
    }
    kkt.block(0, n + p, n, m) = red.winv_g.transpose();
    kkt.block(n + p, 0, m, n) = red.winv_g;
    kkt.block(n + p, n + p, m, m).diagonal().setConstant(-1.0);
    red.lu.compute(kkt);
  };

  // Solves [0 A' G'; A 0 0; G 0 -W'W] [x; y; z] = [rx; ry; rz], refining
  // against the residual of the unscaled system.
  auto kkt_solve = [&](const NtScaling& scaling, const Vec& rx, const Vec& ry, const Vec& rz, Vec& x, Vec& y,
                       Vec& z) {
    auto reduced = [&](const Vec& bx, const Vec& by, const Vec& bz, Vec& ox, Vec& oy, Vec& oz) {
      Vec rhs(n + p + m);
      rhs.head(n) = bx;
      if (p > 0) rhs.segment(n, p) = by;
      rhs.tail(m) = scaling.apply_inverse(bz);
      const Vec sol = red.lu.solve(rhs);
      ox = sol.head(n);
      oy = p > 0 ? Vec(sol.segment(n, p)) : Vec(0);
      oz = scaling.apply_inverse(sol.tail(m));
    };
    reduced(rx, ry, rz, x, y, z);
    const double scale = std::max({1.0, rx.norm(), ry.norm(), rz.norm()});
    for (int it = 0; it < 5; ++it) {
      Vec ex = rx - G.transpose() * z;
      if (p > 0) ex -= A.transpose() * y;
      const Vec ey = p > 0 ? Vec(ry - A * x) : Vec(0);
      const Vec ez = rz - G * x + scaling.apply(scaling.apply(z));
      if (std::max({ex.norm(), ey.norm(), ez.norm()}) <= 1e-14 * scale) break;
      Vec cx, cy, cz;
      reduced(ex, ey, ez, cx, cy, cz);
      x += cx;
      if (p > 0) y += cy;
      z += cz;
    }
  };

  // Initial point.
  NtScaling identity;
  Vec x(n), y(p), z(m), s(m);
  double tau = 1.0, kappa = 1.0;
  {
    // W = I scaling: orthant d = 1, cone blocks w = e, eta = 1.
    Vec se = e, ze = e;
    identity.update(dims, se, ze);
    factor(identity);
    if (!red.lu.matrixLU().allFinite()) {
      out.diagnostic = "KKT factorization failed at initialization";
      return out;
    }
    Vec xh, yh, zh;
    kkt_solve(identity, Vec::Zero(n), b, h, xh, yh, zh);
    x = xh;
    Vec s_hat = -zh;
    kkt_solve(identity, -c, Vec::Zero(p), Vec::Zero(m), xh, yh, zh);
    y = yh;
    Vec z_hat = zh;
    const double ap = cone_infeasibility(dims, s_hat);
    s = ap < 0.0 ? s_hat : Vec(s_hat + (1.0 + ap) * e);
    const double ad = cone_infeasibility(dims, z_hat);
    z = ad < 0.0 ? z_hat : Vec(z_hat + (1.0 + ad) * e);
  }

  double best_merit = std::numeric_limits<double>::infinity();
  ConeSolution best;
  // A stalled run whose best iterate is within 100x of every tolerance is
  // reported optimal with a diagnostic instead of failing.
  auto give_up = [&](Status st, const std::string& why) {
    ConeSolution r = best;
    const double f = 100.0;
    if (r.x.size() > 0 && r.primal_residual <= f * tol.feasibility && r.dual_residual <= f * tol.feasibility &&
        r.gap <= f * std::max(tol.gap_absolute, tol.gap_relative * std::abs(r.primal_objective))) {
      r.status = Status::optimal;
      r.diagnostic = "reduced accuracy: " + why;
      return r;
    }
    r.status = st;
    r.diagnostic = why;
    return r;
  };

  for (int iter = 0; iter <= tol.max_iterations; ++iter) {
    // Residuals of the embedding.
    const Vec rx = (p > 0 ? Vec(A.transpose() * y) : Vec::Zero(n)) + G.transpose() * z + c * tau;
    const Vec ry = (p > 0 ? Vec(A * x - b * tau) : Vec(0));
    const Vec rz = G * x + s - h * tau;
    const double cx = c.dot(x), by = p > 0 ? b.dot(y) : 0.0, hz = h.dot(z);
    const double rt = kappa + cx + by + hz;

    const double mu = (s.dot(z) + tau * kappa) / (degree + 1.0);
    const double pcost = cx / tau;
    const double dcost = -(by + hz) / tau;
    const double gap = s.dot(z) / (tau * tau);
    const double pres = std::max(p > 0 ? (A * x / tau - b).norm() / res_y0 : 0.0,
                                 (G * x / tau + s / tau - h).norm() / res_z0);
    const double dres = ((p > 0 ? Vec(A.transpose() * y) : Vec::Zero(n)) + G.transpose() * z + c * tau).norm() /
                        tau / res_x0;
    double relgap = std::numeric_limits<double>::infinity();
    if (pcost < 0.0) relgap = gap / -pcost;
    else if (dcost > 0.0) relgap = gap / dcost;

    auto snapshot = [&](Status st) {
      ConeSolution r;
      r.status = st;
      r.x = x / tau;
      r.y = y / tau;
      r.z = z / tau;
      r.s = s / tau;
      r.primal_objective = pcost;
      r.dual_objective = dcost;
      r.primal_residual = pres;
      r.dual_residual = dres;
      r.gap = gap;
      r.iterations = iter;
      return r;
    };

    if (pres <= tol.feasibility && dres <= tol.feasibility &&
        (gap <= tol.gap_absolute || relgap <= tol.gap_relative)) {
      return snapshot(Status::optimal);
    }

    // Certificates.
    const double aty_gtz = ((p > 0 ? Vec(A.transpose() * y) : Vec::Zero(n)) + G.transpose() * z).norm();
    if (hz + by < 0.0) {
      const double pinf = aty_gtz / res_x0 / -(hz + by);
      if (pinf <= tol.feasibility) {
        ConeSolution r = snapshot(Status::infeasible);
        r.x = x;
        r.y = y / -(hz + by);
        r.z = z / -(hz + by);
        std::ostringstream os;
        os << "primal infeasible: dual ray with h'z + b'y = -1, ||A'y + G'z|| = " << pinf;
        r.diagnostic = os.str();
        return r;
      }
    }
    if (cx < 0.0) {
      const double ax = p > 0 ? (A * x).norm() / res_y0 : 0.0;
      const double dinf = std::max(ax, (G * x + s).norm() / res_z0) / -cx;
      if (dinf <= tol.feasibility) {
        ConeSolution r = snapshot(Status::unbounded);
        r.x = x / -cx;
        r.diagnostic = "dual infeasible: primal ray with c'x = -1";
        return r;
      }
    }

    const double merit = std::max({pres, dres, std::min(gap, relgap)});
    if (std::isfinite(merit) && merit < best_merit) {
      best_merit = merit;
      best = snapshot(Status::max_iterations);
    }
    if (iter == tol.max_iterations) break;

    if (!W.update(dims, s, z)) {
      return give_up(Status::numerical_failure, "iterate left the cone interior");
    }
    const Vec lambda = W.apply(z);
    factor(W);
    if (!red.lu.matrixLU().allFinite()) {
      return give_up(Status::numerical_failure, "KKT factorization failed");
    }

    // Direction for the tau-independent part: K u1 = [-c; b; h].
    Vec x1, y1, z1;
    kkt_solve(W, -c, b, h, x1, y1, z1);
    const double denom_base = c.dot(x1) + (p > 0 ? b.dot(y1) : 0.0) + h.dot(z1);

    struct Direction {
      Vec dx, dy, dz, ds;
      double dtau = 0.0, dkappa = 0.0;
    };

    // Solves the linearized system for the given complementarity targets.
    auto direction = [&](double sigma_res, const Vec& ds_target, double dk_target) -> Direction {
      const double f = 1.0 - sigma_res;
      const Vec dxr = -f * rx;
      const Vec dyr = -f * ry;
      const Vec dzr = -f * rz - W.apply(jordan_divide(dims, lambda, ds_target));
      Vec x2, y2, z2;
      kkt_solve(W, dxr, dyr, dzr, x2, y2, z2);
      const double num = -f * rt - dk_target / tau -
                         (c.dot(x2) + (p > 0 ? b.dot(y2) : 0.0) + h.dot(z2));
      const double den = denom_base - kappa / tau;
      Direction d;
      d.dtau = num / den;
      d.dx = x2 + d.dtau * x1;
      d.dy = p > 0 ? Vec(y2 + d.dtau * y1) : Vec(0);
      d.dz = z2 + d.dtau * z1;
      // ds = W'(lambda \ ds_target - W dz)
      d.ds = W.apply(jordan_divide(dims, lambda, ds_target) - W.apply(d.dz));
      d.dkappa = (dk_target - kappa * d.dtau) / tau;
      return d;
    };

    auto step_length = [&](const Direction& d) {
      double a = std::min(max_step(dims, s, d.ds), max_step(dims, z, d.dz));
      if (d.dtau < 0.0) a = std::min(a, -tau / d.dtau);
      if (d.dkappa < 0.0) a = std::min(a, -kappa / d.dkappa);
      return a;
    };

    // Predictor.
    const Vec lam_sq = jordan_product(dims, lambda, lambda);
    Direction aff = direction(0.0, -lam_sq, -kappa * tau);
    const double a_aff = std::min(1.0, step_length(aff));
    double sigma = std::pow(1.0 - a_aff, 3);
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector.
    const Vec corr = jordan_product(dims, W.apply_inverse(aff.ds), W.apply(aff.dz));
    const Vec ds_target = -lam_sq + sigma * mu * e - corr;
    const double dk_target = -kappa * tau + sigma * mu - aff.dtau * aff.dkappa;
    Direction dir = direction(sigma, ds_target, dk_target);
    const double a_max = step_length(dir);
    const double alpha = std::min(1.0, 0.99 * a_max);
    if (!(alpha > 1e-12) || !dir.dx.allFinite()) {
      return give_up(Status::numerical_failure, "step length collapsed");
    }

    x += alpha * dir.dx;
    if (p > 0) y += alpha * dir.dy;
    z += alpha * dir.dz;
    s += alpha * dir.ds;
    tau += alpha * dir.dtau;
    kappa += alpha * dir.dkappa;
  }

  return give_up(Status::max_iterations, "iteration cap reached");
}

}  // namespace rsswipt::solver
