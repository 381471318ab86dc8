// Test-only reference SDP solver, used to cross-check the interior-point
// implementation: a dual log-barrier Newton method. It follows the dual
// central path of
//
//   max  b^T y - M w   s.t.  C - sum_k y_k A_k + w I >= 0,  w >= 0,
//                            y_k <= 0 on inequality rows,
//
// where the artificial slack w makes y = 0 always feasible and vanishes at
// the optimum (its multiplier is the trace of the primal solution, so M just
// has to dominate that). The Newton system lives in the constraint
// multipliers only (a handful of variables), which makes tight tolerances
// cheap. Everything is hand-rolled on plain arrays; no linear-algebra code
// is shared with the solver under test.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "freshedge/sdp_solver.hpp"

namespace freshedge_test {

// Row-major dense matrix on a plain vector.
struct RefMat {
  int n = 0;
  std::vector<double> a;
  explicit RefMat(int size = 0) : n(size), a(static_cast<size_t>(size) * size, 0.0) {}
  double& at(int r, int c) { return a[static_cast<size_t>(r) * n + c]; }
  double at(int r, int c) const { return a[static_cast<size_t>(r) * n + c]; }
};

inline double ref_dot(const RefMat& x, const RefMat& y) {
  double s = 0.0;
  for (size_t k = 0; k < x.a.size(); ++k) s += x.a[k] * y.a[k];
  return s;
}

// In-place lower Cholesky; returns false when the matrix is not positive
// definite.
inline bool ref_cholesky(const RefMat& m, RefMat& l) {
  const int n = m.n;
  l = RefMat(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = m.at(i, j);
      for (int k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
      if (i == j) {
        if (s <= 0.0) return false;
        l.at(i, i) = std::sqrt(s);
      } else {
        l.at(i, j) = s / l.at(j, j);
      }
    }
  }
  return true;
}

// Solves (L L^T) X = B for symmetric input B.
inline RefMat ref_chol_solve(const RefMat& l, const RefMat& b) {
  const int n = l.n;
  RefMat x = b;
  for (int col = 0; col < n; ++col) {
    for (int i = 0; i < n; ++i) {
      double s = x.at(i, col);
      for (int k = 0; k < i; ++k) s -= l.at(i, k) * x.at(k, col);
      x.at(i, col) = s / l.at(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = x.at(i, col);
      for (int k = i + 1; k < n; ++k) s -= l.at(k, i) * x.at(k, col);
      x.at(i, col) = s / l.at(i, i);
    }
  }
  return x;
}

inline double ref_logdet_from_chol(const RefMat& l) {
  double v = 0.0;
  for (int i = 0; i < l.n; ++i) v += std::log(l.at(i, i));
  return 2.0 * v;
}

// Gaussian elimination with partial pivoting for the tiny Newton systems.
inline std::vector<double> ref_dense_solve(std::vector<std::vector<double>> a,
                                           std::vector<double> rhs) {
  const size_t n = rhs.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(rhs[col], rhs[piv]);
    if (std::abs(a[col][col]) < 1e-300) throw std::runtime_error("reference: singular Newton system");
    for (size_t r = col + 1; r < n; ++r) {
      double f = a[r][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

// Returns the optimal objective value (dual optimum == primal optimum under
// the strong duality our generated instances guarantee).
inline double reference_solve(const freshedge::SdpProblem& p) {
  using freshedge::ConstraintSense;
  const size_t nb = p.block_sizes.size();
  const size_t m = p.constraints.size();

  std::vector<RefMat> c(nb);
  for (size_t b = 0; b < nb; ++b) {
    const int n = p.block_sizes[b];
    c[b] = RefMat(n);
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) c[b].at(r, s) = p.objective[b](r, s);
  }
  std::vector<std::vector<std::pair<size_t, RefMat>>> rows(m);
  std::vector<double> rhs(m);
  std::vector<bool> is_ineq(m);
  double max_rhs = 0.0;
  for (size_t k = 0; k < m; ++k) {
    rhs[k] = p.constraints[k].rhs;
    max_rhs = std::max(max_rhs, std::abs(rhs[k]));
    is_ineq[k] = p.constraints[k].sense == ConstraintSense::LessEqual;
    for (const auto& [b, mat] : p.constraints[k].terms) {
      RefMat rm(p.block_sizes[static_cast<size_t>(b)]);
      for (int r = 0; r < rm.n; ++r)
        for (int s = 0; s < rm.n; ++s) rm.at(r, s) = mat(r, s);
      rows[k].emplace_back(static_cast<size_t>(b), std::move(rm));
    }
  }

  auto barrier_blocks = [&](const std::vector<double>& y, double w, std::vector<RefMat>& z) {
    z = c;
    for (size_t k = 0; k < m; ++k)
      for (const auto& [b, a] : rows[k])
        for (size_t t = 0; t < a.a.size(); ++t) z[b].a[t] -= y[k] * a.a[t];
    for (size_t b = 0; b < nb; ++b)
      for (int i = 0; i < z[b].n; ++i) z[b].at(i, i) += w;
  };

  double total_dim = 0.0;
  for (int n : p.block_sizes) total_dim += n;

  double penalty = 1e5 * (1.0 + max_rhs);
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::vector<double> y(m, 0.0);
    for (size_t k = 0; k < m; ++k)
      if (is_ineq[k]) y[k] = -1.0;

    // strictly feasible w: grow a diagonal shift until every block factors
    double w = 1.0;
    for (int tries = 0; tries < 200; ++tries) {
      std::vector<RefMat> z;
      barrier_blocks(y, w, z);
      bool ok = true;
      RefMat l;
      for (size_t b = 0; b < nb && ok; ++b) ok = ref_cholesky(z[b], l);
      if (ok) break;
      w *= 2.0;
    }
    w += 1.0;

    double dual_value = 0.0;
    double t = 100.0 * (1.0 + max_rhs);
    const double t_floor = 1e-12;
    double trace_estimate = 0.0;
    while (true) {
      // Newton centering for phi_t(y, w) = b.y - M w + t sum logdet + t log w
      //                                    + t sum_ineq log(-y)
      for (int newton = 0; newton < 80; ++newton) {
        std::vector<RefMat> z;
        barrier_blocks(y, w, z);
        std::vector<RefMat> l(nb), zinv(nb);
        for (size_t b = 0; b < nb; ++b) {
          if (!ref_cholesky(z[b], l[b])) throw std::runtime_error("reference: infeasible iterate");
          RefMat eye(z[b].n);
          for (int i = 0; i < z[b].n; ++i) eye.at(i, i) = 1.0;
          zinv[b] = ref_chol_solve(l[b], eye);
        }
        // W_k = Z^{-1} D_k per block with D_k = -A_k; D_w = +I
        const size_t dim = m + 1;
        std::vector<double> grad(dim, 0.0);
        for (size_t k = 0; k < m; ++k) {
          grad[k] = rhs[k];
          for (const auto& [b, a] : rows[k])
            grad[k] -= t * ref_dot(zinv[b], a);  // d/dy_k [t logdet Z] = t Tr(Z^-1 (-A_k))
          if (is_ineq[k]) grad[k] += t / y[k];
        }
        trace_estimate = 0.0;
        for (size_t b = 0; b < nb; ++b)
          for (int i = 0; i < zinv[b].n; ++i) trace_estimate += zinv[b].at(i, i);
        trace_estimate *= t;
        grad[m] = -penalty + trace_estimate + t / w;

        // Hessian H(u,v) = -t sum_b Tr(Zinv D_u Zinv D_v) (+ scalar barrier terms)
        std::vector<std::vector<RefMat>> wmats(dim);
        for (size_t u = 0; u < dim; ++u) wmats[u].resize(nb);
        for (size_t b = 0; b < nb; ++b) {
          for (size_t k = 0; k < m; ++k) {
            RefMat d(z[b].n);
            for (const auto& [bb, a] : rows[k])
              if (bb == b)
                for (size_t q = 0; q < a.a.size(); ++q) d.a[q] -= a.a[q];
            wmats[k][b] = ref_chol_solve(l[b], d);
          }
          wmats[m][b] = zinv[b];
        }
        std::vector<std::vector<double>> h(dim, std::vector<double>(dim, 0.0));
        for (size_t u = 0; u < dim; ++u)
          for (size_t v = u; v < dim; ++v) {
            double s = 0.0;
            for (size_t b = 0; b < nb; ++b) {
              // Tr(Wu Wv) with Wu = Zinv Du
              const RefMat& wu = wmats[u][b];
              const RefMat& wv = wmats[v][b];
              const int n = wu.n;
              for (int r = 0; r < n; ++r)
                for (int cix = 0; cix < n; ++cix) s += wu.at(r, cix) * wv.at(cix, r);
            }
            h[u][v] = h[v][u] = -t * s;
          }
        for (size_t k = 0; k < m; ++k)
          if (is_ineq[k]) h[k][k] -= t / (y[k] * y[k]);
        h[m][m] -= t / (w * w);

        // ascent direction: solve (-H) d = grad
        std::vector<std::vector<double>> neg_h(dim, std::vector<double>(dim));
        for (size_t u = 0; u < dim; ++u)
          for (size_t v = 0; v < dim; ++v) neg_h[u][v] = -h[u][v];
        std::vector<double> dir = ref_dense_solve(neg_h, grad);
        double decrement = 0.0;
        for (size_t u = 0; u < dim; ++u) decrement += grad[u] * dir[u];
        if (decrement <= std::max(1e-22, 1e-9 * t)) break;

        // backtracking line search on feasibility then sufficient ascent
        auto value_at = [&](const std::vector<double>& yy, double ww, bool& feasible) {
          feasible = false;
          if (ww <= 0.0) return 0.0;
          for (size_t k = 0; k < m; ++k)
            if (is_ineq[k] && yy[k] >= 0.0) return 0.0;
          std::vector<RefMat> zz;
          barrier_blocks(yy, ww, zz);
          double val = -penalty * ww + t * std::log(ww);
          RefMat lb;
          for (size_t b = 0; b < nb; ++b) {
            if (!ref_cholesky(zz[b], lb)) return 0.0;
            val += t * ref_logdet_from_chol(lb);
          }
          for (size_t k = 0; k < m; ++k) {
            val += rhs[k] * yy[k];
            if (is_ineq[k]) val += t * std::log(-yy[k]);
          }
          feasible = true;
          return val;
        };
        bool feasible = false;
        double base = value_at(y, w, feasible);
        double tau = 1.0;
        for (int bt = 0; bt < 60; ++bt) {
          std::vector<double> yy = y;
          for (size_t k = 0; k < m; ++k) yy[k] += tau * dir[k];
          double ww = w + tau * dir[m];
          bool ok = false;
          double val = value_at(yy, ww, ok);
          if (ok && val >= base + 0.25 * tau * decrement) {
            y = yy;
            w = ww;
            break;
          }
          tau *= 0.5;
          if (bt == 59) tau = 0.0;
        }
        if (tau == 0.0) break;
      }
      dual_value = -penalty * w;
      for (size_t k = 0; k < m; ++k) dual_value += rhs[k] * y[k];
      if (t <= t_floor * (1.0 + std::abs(dual_value))) break;
      t *= 0.15;
    }
    // M must dominate the primal trace for the slack to vanish
    if (trace_estimate < 0.5 * penalty) return dual_value;
    penalty *= 100.0;
  }
  throw std::runtime_error("reference: artificial-slack penalty too small");
}

}  // namespace freshedge_test
