// Self-contained primal-dual interior-point solver for small dense SDPs
// with trace-form linear constraints:
//
//   min  sum_b <C_b, X_b>   s.t.  sum_b <A_kb, X_b> (<= or =) rhs_k,  X_b PSD.
//
// Inequalities are folded into the block structure as 1x1 slack blocks, so
// the core iteration only ever sees equality standard form. The search
// direction is the standard symmetrized Newton direction with a
// Mehrotra-style predictor-corrector; step lengths use a fraction-to-
// boundary rule with factor 0.98. Constraint rows are normalized by their
// Frobenius norm, which makes the solve invariant to row scaling.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "freshedge/types.hpp"

namespace freshedge {

enum class ConstraintSense : uint8_t { LessEqual, Equal };

struct SdpConstraint {
  ConstraintSense sense = ConstraintSense::Equal;
  double rhs = 0.0;
  // Sparse across blocks, dense within: (block index, symmetric matrix).
  std::vector<std::pair<int, Eigen::MatrixXd>> terms;
};

struct SdpProblem {
  std::vector<int> block_sizes;
  std::vector<Eigen::MatrixXd> objective;  // one (possibly zero) matrix per block
  std::vector<SdpConstraint> constraints;

  void validate() const {
    if (block_sizes.empty()) throw std::invalid_argument("sdp: no blocks");
    if (objective.size() != block_sizes.size())
      throw std::invalid_argument("sdp: objective/block count mismatch");
    for (size_t b = 0; b < block_sizes.size(); ++b) {
      if (block_sizes[b] < 1) throw std::invalid_argument("sdp: empty block");
      if (objective[b].rows() != block_sizes[b] || objective[b].cols() != block_sizes[b])
        throw std::invalid_argument("sdp: objective dimension mismatch");
      if (!objective[b].isApprox(objective[b].transpose(), 1e-12))
        throw std::invalid_argument("sdp: objective not symmetric");
    }
    for (const SdpConstraint& c : constraints) {
      if (c.terms.empty()) throw std::invalid_argument("sdp: constraint with no terms");
      for (const auto& [b, m] : c.terms) {
        if (b < 0 || b >= static_cast<int>(block_sizes.size()))
          throw std::invalid_argument("sdp: constraint references missing block");
        if (m.rows() != block_sizes[static_cast<size_t>(b)] ||
            m.cols() != block_sizes[static_cast<size_t>(b)])
          throw std::invalid_argument("sdp: constraint dimension mismatch");
        if (!m.isApprox(m.transpose(), 1e-12))
          throw std::invalid_argument("sdp: constraint matrix not symmetric");
      }
    }
  }
};

enum class SolveStatus : uint8_t { Success, MaxIterations, NumericalFailure, Infeasible };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Success: return "success";
    case SolveStatus::MaxIterations: return "max-iterations";
    case SolveStatus::NumericalFailure: return "numerical-failure";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "?";
}

struct SolveCertificate {
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;          // |primal - dual| / (1 + |primal|)
  double primal_infeasibility = 0.0; // max violation over norm-scaled constraints
  double dual_infeasibility = 0.0;
  double min_eigenvalue = 0.0;       // over the primal blocks
  int iterations = 0;
};

struct SdpSolveResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  std::vector<Eigen::MatrixXd> primal;  // X per original block
  std::vector<double> dual;             // y per original constraint
  std::vector<Eigen::MatrixXd> dual_slack;  // Z per original block
  SolveCertificate certificate;
  std::string message;
};

// Per-iteration snapshot for instrumentation (weak-duality checks in tests).
struct SdpIterationInfo {
  int iteration = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double mu = 0.0;
  double primal_residual_dot_y = 0.0;  // |y . r_p|
  double dual_residual_dot_x = 0.0;    // |<R_d, X>|
};

namespace sdp_detail {

struct StandardForm {
  std::vector<int> sizes;               // original blocks then slack blocks
  std::vector<Eigen::MatrixXd> cost;
  std::vector<double> rhs;
  std::vector<std::vector<std::pair<int, Eigen::MatrixXd>>> rows;  // per constraint
  std::vector<std::vector<int>> block_rows;  // constraints touching each block
  std::vector<double> row_norms;        // normalization factors applied
  int original_blocks = 0;
  int original_constraints = 0;
};

inline StandardForm build_standard_form(const SdpProblem& p) {
  StandardForm sf;
  sf.original_blocks = static_cast<int>(p.block_sizes.size());
  sf.original_constraints = static_cast<int>(p.constraints.size());
  sf.sizes = p.block_sizes;
  sf.cost = p.objective;
  for (size_t k = 0; k < p.constraints.size(); ++k) {
    const SdpConstraint& c = p.constraints[k];
    double norm2 = 0.0;
    for (const auto& [b, m] : c.terms) norm2 += m.squaredNorm();
    double norm = std::sqrt(norm2);
    if (!(norm > 0.0)) throw std::invalid_argument("sdp: zero constraint row");
    sf.row_norms.push_back(norm);
    std::vector<std::pair<int, Eigen::MatrixXd>> row;
    for (const auto& [b, m] : c.terms) row.emplace_back(b, m / norm);
    double rhs = c.rhs / norm;
    if (c.sense == ConstraintSense::LessEqual) {
      int slack_block = static_cast<int>(sf.sizes.size());
      sf.sizes.push_back(1);
      sf.cost.push_back(Eigen::MatrixXd::Zero(1, 1));
      row.emplace_back(slack_block, Eigen::MatrixXd::Ones(1, 1));
    }
    sf.rows.push_back(std::move(row));
    sf.rhs.push_back(rhs);
  }
  sf.block_rows.assign(sf.sizes.size(), {});
  for (size_t k = 0; k < sf.rows.size(); ++k)
    for (const auto& [b, m] : sf.rows[k]) sf.block_rows[static_cast<size_t>(b)].push_back(static_cast<int>(k));
  return sf;
}

// Gram-Schmidt over the equality rows. Detects linearly dependent rows;
// a dependency whose right-hand sides disagree proves primal infeasibility,
// a consistent one marks the row as redundant (safe to drop with zero
// multiplier). Only invoked on the slow path after a singular Schur system.
struct EqualityAnalysis {
  bool inconsistent = false;
  std::vector<size_t> redundant;  // constraint indices
};

inline EqualityAnalysis analyze_equalities(const SdpProblem& p) {
  EqualityAnalysis out;
  std::vector<Eigen::VectorXd> basis;
  std::vector<double> basis_rhs;
  int total = 0;
  std::vector<int> offsets;
  for (int n : p.block_sizes) {
    offsets.push_back(total);
    total += n * n;
  }
  for (size_t k = 0; k < p.constraints.size(); ++k) {
    const SdpConstraint& c = p.constraints[k];
    if (c.sense != ConstraintSense::Equal) continue;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(total);
    for (const auto& [b, m] : c.terms)
      for (int r = 0; r < m.rows(); ++r)
        for (int s = 0; s < m.cols(); ++s)
          v[offsets[static_cast<size_t>(b)] + r * m.cols() + s] = m(r, s);
    double rhs = c.rhs;
    double orig = v.norm();
    if (!(orig > 0)) continue;
    v /= orig;
    rhs /= orig;
    for (size_t l = 0; l < basis.size(); ++l) {
      double coef = basis[l].dot(v);
      v -= coef * basis[l];
      rhs -= coef * basis_rhs[l];
    }
    if (v.norm() < 1e-9) {
      if (std::abs(rhs) > 1e-7) out.inconsistent = true;
      else out.redundant.push_back(k);
      continue;
    }
    double nn = v.norm();
    basis.push_back(v / nn);
    basis_rhs.push_back(rhs / nn);
  }
  return out;
}

// Largest alpha with M + alpha * D still PSD, via Cholesky of M.
inline double max_step(const Eigen::MatrixXd& m, const Eigen::MatrixXd& d) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return 0.0;
  Eigen::MatrixXd l = llt.matrixL();
  Eigen::MatrixXd s = l.triangularView<Eigen::Lower>().solve(d);
  s = l.triangularView<Eigen::Lower>().solve(s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()),
                                                    Eigen::EigenvaluesOnly);
  double lambda_min = es.eigenvalues().minCoeff();
  if (lambda_min >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lambda_min;
}

}  // namespace sdp_detail

struct SdpOptions {
  double tolerance = 1e-7;
  int max_iterations = 100;
  double fraction_to_boundary = 0.98;
  std::function<void(const SdpIterationInfo&)> iteration_callback;
};

class SdpSolver {
 public:
  using Options = SdpOptions;

  static SdpSolveResult solve(const SdpProblem& problem, const Options& options = Options()) {
    problem.validate();
    using namespace sdp_detail;
    StandardForm sf = build_standard_form(problem);
    const int nblocks = static_cast<int>(sf.sizes.size());
    const int m = static_cast<int>(sf.rows.size());
    const size_t um = static_cast<size_t>(m);
    double n_total = 0.0;
    for (int n : sf.sizes) n_total += n;

    // Initial iterate: multiples of the identity sized from the data.
    double max_rhs = 0.0;
    for (double b : sf.rhs) max_rhs = std::max(max_rhs, std::abs(b));
    double max_cost = 0.0;
    for (const auto& c : sf.cost) max_cost = std::max(max_cost, c.norm());
    const double rho_p = std::max({10.0, 2.0 * max_rhs, std::sqrt(n_total)});
    const double rho_d = std::max({10.0, 2.0 * max_cost, std::sqrt(n_total)});

    std::vector<Eigen::MatrixXd> x, z;
    for (int n : sf.sizes) {
      x.push_back(rho_p * Eigen::MatrixXd::Identity(n, n));
      z.push_back(rho_d * Eigen::MatrixXd::Identity(n, n));
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

    auto apply_a = [&](const std::vector<Eigen::MatrixXd>& mats) {
      Eigen::VectorXd out(m);
      for (int k = 0; k < m; ++k) {
        double v = 0.0;
        for (const auto& [b, a] : sf.rows[static_cast<size_t>(k)])
          v += a.cwiseProduct(mats[static_cast<size_t>(b)]).sum();
        out[k] = v;
      }
      return out;
    };
    auto apply_at = [&](const Eigen::VectorXd& yy) {
      std::vector<Eigen::MatrixXd> out;
      for (int b = 0; b < nblocks; ++b)
        out.push_back(Eigen::MatrixXd::Zero(sf.sizes[static_cast<size_t>(b)],
                                            sf.sizes[static_cast<size_t>(b)]));
      for (int k = 0; k < m; ++k)
        for (const auto& [b, a] : sf.rows[static_cast<size_t>(k)])
          out[static_cast<size_t>(b)] += yy[k] * a;
      return out;
    };

    SdpSolveResult result;
    auto finish = [&](SolveStatus status, const std::string& message, int iterations) {
      result.status = status;
      result.message = message;
      result.primal.assign(x.begin(), x.begin() + sf.original_blocks);
      result.dual_slack.assign(z.begin(), z.begin() + sf.original_blocks);
      result.dual.resize(static_cast<size_t>(sf.original_constraints));
      for (int k = 0; k < sf.original_constraints; ++k)
        result.dual[static_cast<size_t>(k)] = y[k] / sf.row_norms[static_cast<size_t>(k)];
      result.certificate = check_certificates(problem, result.primal, result.dual, result.dual_slack);
      result.certificate.iterations = iterations;
      return result;
    };

    double best_merit = std::numeric_limits<double>::infinity();
    std::vector<Eigen::MatrixXd> best_x = x, best_z = z;
    Eigen::VectorXd best_y = y;

    Eigen::VectorXd rhs_vec = Eigen::Map<const Eigen::VectorXd>(sf.rhs.data(), m);
    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
      // residuals and merit tracking
      Eigen::VectorXd ax = apply_a(x);
      Eigen::VectorXd r_p = rhs_vec - ax;
      std::vector<Eigen::MatrixXd> aty = apply_at(y);
      std::vector<Eigen::MatrixXd> r_d(static_cast<size_t>(nblocks));
      double dual_inf = 0.0, xz = 0.0;
      double primal_obj = 0.0, dual_obj = rhs_vec.dot(y);
      double rd_dot_x = 0.0;
      for (int b = 0; b < nblocks; ++b) {
        const size_t ub = static_cast<size_t>(b);
        r_d[ub] = sf.cost[ub] - z[ub] - aty[ub];
        dual_inf = std::max(dual_inf, r_d[ub].norm() / (1.0 + sf.cost[ub].norm()));
        xz += x[ub].cwiseProduct(z[ub]).sum();
        primal_obj += sf.cost[ub].cwiseProduct(x[ub]).sum();
        rd_dot_x += r_d[ub].cwiseProduct(x[ub]).sum();
      }
      double mu = xz / n_total;
      double primal_inf = 0.0;
      for (int k = 0; k < m; ++k)
        primal_inf = std::max(primal_inf, std::abs(r_p[k]) / (1.0 + std::abs(rhs_vec[k])));
      double gap = std::abs(primal_obj - dual_obj) / (1.0 + std::abs(primal_obj));

      if (options.iteration_callback) {
        SdpIterationInfo info;
        info.iteration = iter;
        info.primal_objective = primal_obj;
        info.dual_objective = dual_obj;
        info.mu = mu;
        info.primal_residual_dot_y = std::abs(y.dot(r_p));
        info.dual_residual_dot_x = std::abs(rd_dot_x);
        options.iteration_callback(info);
      }

      double merit = std::max({gap, primal_inf, dual_inf});
      if (merit < best_merit) {
        best_merit = merit;
        best_x = x;
        best_z = z;
        best_y = y;
      }
      if (gap <= options.tolerance && primal_inf <= options.tolerance &&
          dual_inf <= options.tolerance)
        return finish(SolveStatus::Success, "converged", iter);
      if (y.norm() > 1e12 * (1.0 + rhs_vec.norm()))
        return finish(SolveStatus::Infeasible, "dual iterates diverged", iter);

      // factor Z and precompute per-row W = X A Z^{-1} per block
      std::vector<Eigen::LLT<Eigen::MatrixXd>> zllt;
      zllt.reserve(static_cast<size_t>(nblocks));
      bool z_ok = true;
      for (int b = 0; b < nblocks; ++b) {
        zllt.emplace_back(z[static_cast<size_t>(b)]);
        if (zllt.back().info() != Eigen::Success) z_ok = false;
      }
      if (!z_ok) {
        x = best_x; z = best_z; y = best_y;
        return finish(SolveStatus::NumericalFailure, "dual block lost positive definiteness", iter);
      }
      // right-multiplication by Z^{-1}; for symmetric input M this equals
      // (Z^{-1} M)^T so one triangular solve suffices
      auto zinv_right = [&](int b, const Eigen::MatrixXd& mat) {
        return Eigen::MatrixXd(zllt[static_cast<size_t>(b)].solve(mat).transpose());
      };

      Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(m, m);
      for (int b = 0; b < nblocks; ++b) {
        const auto& rows_here = sf.block_rows[static_cast<size_t>(b)];
        for (int l : rows_here) {
          const Eigen::MatrixXd* a_l = nullptr;
          for (const auto& [bb, a] : sf.rows[static_cast<size_t>(l)])
            if (bb == b) a_l = &a;
          Eigen::MatrixXd w = x[static_cast<size_t>(b)] * zinv_right(b, *a_l);
          for (int k : rows_here) {
            if (k > l) continue;  // Tr(A_k X A_l Z^{-1}) is symmetric in (k,l)
            const Eigen::MatrixXd* a_k = nullptr;
            for (const auto& [bb, a] : sf.rows[static_cast<size_t>(k)])
              if (bb == b) a_k = &a;
            schur(l, k) += a_k->cwiseProduct(w).sum();
          }
        }
      }
      schur = schur.selfadjointView<Eigen::Lower>();

      Eigen::LLT<Eigen::MatrixXd> schur_llt(schur);
      if (schur_llt.info() != Eigen::Success) {
        EqualityAnalysis ea = analyze_equalities(problem);
        if (ea.inconsistent) {
          x = best_x; z = best_z; y = best_y;
          return finish(SolveStatus::Infeasible, "contradictory equality constraints", iter);
        }
        if (!ea.redundant.empty()) {
          // restart without the redundant rows; their multipliers stay zero
          SdpProblem reduced;
          reduced.block_sizes = problem.block_sizes;
          reduced.objective = problem.objective;
          std::vector<size_t> kept;
          for (size_t k = 0; k < problem.constraints.size(); ++k) {
            if (std::find(ea.redundant.begin(), ea.redundant.end(), k) != ea.redundant.end())
              continue;
            kept.push_back(k);
            reduced.constraints.push_back(problem.constraints[k]);
          }
          SdpSolveResult sub = solve(reduced, options);
          std::vector<double> dual(problem.constraints.size(), 0.0);
          for (size_t i = 0; i < kept.size(); ++i) dual[kept[i]] = sub.dual[i];
          sub.dual = std::move(dual);
          sub.certificate = check_certificates(problem, sub.primal, sub.dual, sub.dual_slack);
          sub.certificate.iterations += iter;
          return sub;
        }
        x = best_x; z = best_z; y = best_y;
        return finish(SolveStatus::NumericalFailure, "singular Schur system", iter);
      }

      // base right-hand side pieces shared by predictor and corrector
      std::vector<Eigen::MatrixXd> xrz(static_cast<size_t>(nblocks));
      std::vector<Eigen::MatrixXd> zinv_mat(static_cast<size_t>(nblocks));
      for (int b = 0; b < nblocks; ++b) {
        const size_t ub = static_cast<size_t>(b);
        zinv_mat[ub] = zllt[ub].solve(
            Eigen::MatrixXd::Identity(sf.sizes[ub], sf.sizes[ub]));
        xrz[ub] = x[ub] * zinv_right(b, r_d[ub]);
      }
      Eigen::VectorXd a_zinv = apply_a(zinv_mat);
      Eigen::VectorXd a_xrz = apply_a(xrz);

      auto solve_direction = [&](double sigma_mu,
                                 const std::vector<Eigen::MatrixXd>* second_order,
                                 std::vector<Eigen::MatrixXd>& dx,
                                 std::vector<Eigen::MatrixXd>& dz, Eigen::VectorXd& dy) {
        Eigen::VectorXd rhs = rhs_vec + a_xrz - sigma_mu * a_zinv;
        std::vector<Eigen::MatrixXd> so_term;
        if (second_order) {
          so_term.resize(static_cast<size_t>(nblocks));
          for (int b = 0; b < nblocks; ++b)
            so_term[static_cast<size_t>(b)] = (*second_order)[static_cast<size_t>(b)];
          rhs += apply_a(so_term);
        }
        dy = schur_llt.solve(rhs);
        std::vector<Eigen::MatrixXd> at_dy = apply_at(dy);
        dx.resize(static_cast<size_t>(nblocks));
        dz.resize(static_cast<size_t>(nblocks));
        for (int b = 0; b < nblocks; ++b) {
          const size_t ub = static_cast<size_t>(b);
          dz[ub] = r_d[ub] - at_dy[ub];
          Eigen::MatrixXd dxb = sigma_mu * zinv_mat[ub] - x[ub] - x[ub] * zinv_right(b, dz[ub]);
          if (second_order) dxb -= (*second_order)[ub];
          dx[ub] = 0.5 * (dxb + dxb.transpose());
        }
      };

      // predictor (affine scaling)
      std::vector<Eigen::MatrixXd> dx_aff, dz_aff;
      Eigen::VectorXd dy_aff;
      solve_direction(0.0, nullptr, dx_aff, dz_aff, dy_aff);
      double ap_aff = 1.0, ad_aff = 1.0;
      for (int b = 0; b < nblocks; ++b) {
        ap_aff = std::min(ap_aff, max_step(x[static_cast<size_t>(b)], dx_aff[static_cast<size_t>(b)]));
        ad_aff = std::min(ad_aff, max_step(z[static_cast<size_t>(b)], dz_aff[static_cast<size_t>(b)]));
      }
      double mu_aff = 0.0;
      for (int b = 0; b < nblocks; ++b) {
        const size_t ub = static_cast<size_t>(b);
        mu_aff += (x[ub] + ap_aff * dx_aff[ub]).cwiseProduct(z[ub] + ad_aff * dz_aff[ub]).sum();
      }
      mu_aff = std::max(mu_aff / n_total, 0.0);
      double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
      sigma = std::min(std::max(sigma, 1e-10), 1.0);

      // corrector with the second-order term dX_aff dZ_aff Z^{-1}
      std::vector<Eigen::MatrixXd> second(static_cast<size_t>(nblocks));
      for (int b = 0; b < nblocks; ++b) {
        const size_t ub = static_cast<size_t>(b);
        second[ub] = dx_aff[ub] * zinv_right(b, dz_aff[ub]);
      }
      std::vector<Eigen::MatrixXd> dx, dz;
      Eigen::VectorXd dy;
      solve_direction(sigma * mu, &second, dx, dz, dy);

      double ap = 1.0, ad = 1.0;
      for (int b = 0; b < nblocks; ++b) {
        ap = std::min(ap, options.fraction_to_boundary *
                              max_step(x[static_cast<size_t>(b)], dx[static_cast<size_t>(b)]));
        ad = std::min(ad, options.fraction_to_boundary *
                              max_step(z[static_cast<size_t>(b)], dz[static_cast<size_t>(b)]));
      }
      ap = std::min(ap, 1.0);
      ad = std::min(ad, 1.0);
      if (ap < 1e-10 && ad < 1e-10) {
        x = best_x; z = best_z; y = best_y;
        return finish(SolveStatus::NumericalFailure, "step length collapsed", iter);
      }
      for (int b = 0; b < nblocks; ++b) {
        const size_t ub = static_cast<size_t>(b);
        x[ub] += ap * dx[ub];
        z[ub] += ad * dz[ub];
      }
      y += ad * dy;
    }
    x = best_x; z = best_z; y = best_y;
    return finish(SolveStatus::MaxIterations, "iteration limit reached", iter);
  }

  // Recomputes every certificate quantity from the instance and the solution
  // alone; shares no state with the iteration above.
  static SolveCertificate check_certificates(const SdpProblem& problem,
                                             const std::vector<Eigen::MatrixXd>& primal,
                                             const std::vector<double>& dual,
                                             const std::vector<Eigen::MatrixXd>& dual_slack) {
    SolveCertificate cert;
    const size_t nb = problem.block_sizes.size();
    for (size_t b = 0; b < nb; ++b)
      cert.primal_objective += problem.objective[b].cwiseProduct(primal[b]).sum();
    for (size_t k = 0; k < problem.constraints.size(); ++k)
      cert.dual_objective += dual[k] * problem.constraints[k].rhs;
    cert.duality_gap = std::abs(cert.primal_objective - cert.dual_objective) /
                       (1.0 + std::abs(cert.primal_objective));
    for (size_t k = 0; k < problem.constraints.size(); ++k) {
      const SdpConstraint& c = problem.constraints[k];
      double value = 0.0, norm2 = 0.0;
      for (const auto& [b, a] : c.terms) {
        value += a.cwiseProduct(primal[static_cast<size_t>(b)]).sum();
        norm2 += a.squaredNorm();
      }
      double scaled = (value - c.rhs) / std::sqrt(norm2);
      double viol = c.sense == ConstraintSense::Equal ? std::abs(scaled) : std::max(scaled, 0.0);
      cert.primal_infeasibility = std::max(cert.primal_infeasibility, viol);
    }
    cert.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (size_t b = 0; b < nb; ++b) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(primal[b], Eigen::EigenvaluesOnly);
      cert.min_eigenvalue = std::min(cert.min_eigenvalue, es.eigenvalues().minCoeff());
    }
    if (!dual_slack.empty()) {
      for (size_t b = 0; b < nb; ++b) {
        Eigen::MatrixXd rd = problem.objective[b] - dual_slack[b];
        for (size_t k = 0; k < problem.constraints.size(); ++k)
          for (const auto& [bb, a] : problem.constraints[k].terms)
            if (static_cast<size_t>(bb) == b) rd -= dual[k] * a;
        cert.dual_infeasibility =
            std::max(cert.dual_infeasibility, rd.norm() / (1.0 + problem.objective[b].norm()));
      }
    }
    return cert;
  }
};

// ---------------------------------------------------------------------------
// Plain-text instance format (shared with the relaxation module's debug
// dumps): labeled blocks, row-major matrices, full double precision.

inline void write_sdp_problem(std::ostream& os, const SdpProblem& p) {
  os.precision(17);
  os << "sdp-instance v1\n";
  os << "blocks " << p.block_sizes.size() << "\n";
  os << "sizes";
  for (int n : p.block_sizes) os << ' ' << n;
  os << "\n";
  auto write_matrix = [&](const Eigen::MatrixXd& m) {
    for (int r = 0; r < m.rows(); ++r) {
      for (int c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m(r, c);
      os << "\n";
    }
  };
  os << "objective\n";
  for (size_t b = 0; b < p.block_sizes.size(); ++b) {
    os << "block " << b << "\n";
    write_matrix(p.objective[b]);
  }
  os << "constraints " << p.constraints.size() << "\n";
  for (const SdpConstraint& c : p.constraints) {
    os << "constraint " << (c.sense == ConstraintSense::Equal ? "eq" : "le") << ' ' << c.rhs
       << ' ' << c.terms.size() << "\n";
    for (const auto& [b, m] : c.terms) {
      os << "block " << b << "\n";
      write_matrix(m);
    }
  }
  os << "end\n";
}

inline SdpProblem read_sdp_problem(std::istream& is) {
  auto fail = [](const std::string& why) -> SdpProblem {
    throw std::invalid_argument("sdp-instance parse error: " + why);
  };
  std::string tok;
  is >> tok;
  if (tok != "sdp-instance") return fail("missing header");
  is >> tok;  // version
  SdpProblem p;
  size_t nblocks = 0;
  is >> tok >> nblocks;
  if (tok != "blocks") return fail("expected 'blocks'");
  is >> tok;
  if (tok != "sizes") return fail("expected 'sizes'");
  p.block_sizes.resize(nblocks);
  for (size_t b = 0; b < nblocks; ++b) is >> p.block_sizes[b];
  auto read_matrix = [&](int n) {
    Eigen::MatrixXd m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) is >> m(r, c);
    return m;
  };
  is >> tok;
  if (tok != "objective") return fail("expected 'objective'");
  for (size_t b = 0; b < nblocks; ++b) {
    size_t idx = 0;
    is >> tok >> idx;
    if (tok != "block" || idx != b) return fail("objective block order");
    p.objective.push_back(read_matrix(p.block_sizes[b]));
  }
  size_t m = 0;
  is >> tok >> m;
  if (tok != "constraints") return fail("expected 'constraints'");
  for (size_t k = 0; k < m; ++k) {
    SdpConstraint c;
    std::string sense;
    size_t terms = 0;
    is >> tok >> sense >> c.rhs >> terms;
    if (tok != "constraint") return fail("expected 'constraint'");
    c.sense = sense == "eq" ? ConstraintSense::Equal : ConstraintSense::LessEqual;
    for (size_t t = 0; t < terms; ++t) {
      int b = -1;
      is >> tok >> b;
      if (tok != "block") return fail("expected 'block'");
      c.terms.emplace_back(b, read_matrix(p.block_sizes[static_cast<size_t>(b)]));
    }
    p.constraints.push_back(std::move(c));
  }
  is >> tok;
  if (tok != "end") return fail("missing 'end'");
  if (!is) return fail("truncated stream");
  p.validate();
  return p;
}

inline void write_sdp_solution(std::ostream& os, const SdpSolveResult& r) {
  os.precision(17);
  os << "sdp-solution v1\n";
  os << "status " << to_string(r.status) << "\n";
  os << "blocks " << r.primal.size() << "\n";
  for (size_t b = 0; b < r.primal.size(); ++b) {
    os << "block " << b << " size " << r.primal[b].rows() << "\n";
    for (int i = 0; i < r.primal[b].rows(); ++i) {
      for (int j = 0; j < r.primal[b].cols(); ++j) os << (j ? " " : "") << r.primal[b](i, j);
      os << "\n";
    }
  }
  os << "dual " << r.dual.size() << "\n";
  for (size_t k = 0; k < r.dual.size(); ++k) os << (k ? " " : "") << r.dual[k];
  os << "\nend\n";
}

}  // namespace freshedge
