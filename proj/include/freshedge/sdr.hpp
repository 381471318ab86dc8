// Optimization stage: lifts the slot subproblem into a per-service QCQP,
// relaxes it to a block-diagonal SDP, extracts relaxed caching/offloading
// probabilities from the last row of each block, and draws repaired binary
// caching samples.
//
// Lifted variable layout per service (dimension 3I+2):
//   [ z, x_1..x_I, f_1..f_I, dbar_1..dbar_I, 1 ]
// where dbar_i is the auxiliary bound on the ES processing delay Y_i x_i/f_i.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <random>
#include <vector>

#include "freshedge/lyapunov.hpp"
#include "freshedge/sdp_solver.hpp"
#include "freshedge/types.hpp"

namespace freshedge {

struct QcqpServiceBlock {
  Eigen::VectorXd objective_vec;                 // linear objective on [v]
  Eigen::MatrixXd objective;                     // lifted objective form
  std::vector<Eigen::MatrixXd> offload_le_cache; // x_i <= z, one per user
  Eigen::MatrixXd storage_term;                  // contributes S_j z to the shared budget
  Eigen::MatrixXd compute_term;                  // contributes sum_i f_i to the shared budget
  std::vector<Eigen::MatrixXd> binary_x;         // x_i - x_i^2 = 0
  Eigen::MatrixXd binary_z;                      // z - z^2 = 0
  std::vector<Eigen::MatrixXd> delay_aux;        // Y_i x_i - f_i dbar_i <= 0
};

struct QcqpInstance {
  int num_users = 0;
  int num_services = 0;
  int dim = 0;  // 3I+2
  double storage_capacity = 0.0;
  double compute_capacity = 0.0;
  std::vector<QcqpServiceBlock> blocks;

  int idx_z() const { return 0; }
  int idx_x(int i) const { return 1 + i; }
  int idx_f(int i) const { return 1 + num_users + i; }
  int idx_dbar(int i) const { return 1 + 2 * num_users + i; }
  int idx_one() const { return dim - 1; }
};

namespace sdr_detail {
inline Eigen::MatrixXd arrow(const Eigen::VectorXd& b) {
  const int d = static_cast<int>(b.size()) + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  m.block(0, d - 1, d - 1, 1) = 0.5 * b;
  m.block(d - 1, 0, 1, d - 1) = 0.5 * b.transpose();
  return m;
}
}  // namespace sdr_detail

inline QcqpInstance build_qcqp(const SlotSubproblem& sp) {
  using sdr_detail::arrow;
  const int I = sp.num_users, J = sp.num_services;
  QcqpInstance q;
  q.num_users = I;
  q.num_services = J;
  q.dim = 3 * I + 2;
  q.storage_capacity = sp.storage_capacity;
  q.compute_capacity = sp.compute_capacity;
  const int d = q.dim;

  for (int j = 0; j < J; ++j) {
    QcqpServiceBlock blk;
    Eigen::VectorXd b_p = Eigen::VectorXd::Zero(d - 1);
    b_p[q.idx_z()] = sp.gain[static_cast<size_t>(j)];
    for (int i = 0; i < I; ++i) {
      b_p[q.idx_x(i)] = -sp.v * sp.task_value(i, j);
      b_p[q.idx_dbar(i)] = sp.v * sp.lambda_d;
    }
    blk.objective_vec = b_p;
    blk.objective = arrow(b_p);

    for (int i = 0; i < I; ++i) {
      Eigen::VectorXd b_xz = Eigen::VectorXd::Zero(d - 1);
      b_xz[q.idx_z()] = -1.0;
      b_xz[q.idx_x(i)] = 1.0;
      blk.offload_le_cache.push_back(arrow(b_xz));
    }

    Eigen::VectorXd b_s = Eigen::VectorXd::Zero(d - 1);
    b_s[q.idx_z()] = sp.size[static_cast<size_t>(j)];
    blk.storage_term = arrow(b_s);

    Eigen::VectorXd b_f = Eigen::VectorXd::Zero(d - 1);
    for (int i = 0; i < I; ++i) b_f[q.idx_f(i)] = 1.0;
    blk.compute_term = arrow(b_f);

    for (int i = 0; i < I; ++i) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
      m(q.idx_x(i), q.idx_x(i)) = -1.0;
      m(q.idx_x(i), q.idx_one()) = m(q.idx_one(), q.idx_x(i)) = 0.5;
      blk.binary_x.push_back(m);
    }
    {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
      m(q.idx_z(), q.idx_z()) = -1.0;
      m(q.idx_z(), q.idx_one()) = m(q.idx_one(), q.idx_z()) = 0.5;
      blk.binary_z = m;
    }
    for (int i = 0; i < I; ++i) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
      m(q.idx_f(i), q.idx_dbar(i)) = m(q.idx_dbar(i), q.idx_f(i)) = -0.5;
      m(q.idx_x(i), q.idx_one()) = m(q.idx_one(), q.idx_x(i)) = 0.5 * sp.cycles(i, j);
      blk.delay_aux.push_back(m);
    }
    q.blocks.push_back(std::move(blk));
  }
  return q;
}

// Lifts a binary decision (with the closed-form compute split and the
// implied auxiliary delays) into the QCQP coordinate vector of service j.
inline Eigen::VectorXd lift_decision(const QcqpInstance& q, const SlotSubproblem& sp, int j,
                                     const Grid<uint8_t>& offload, const std::vector<uint8_t>& cache,
                                     const Grid<double>& compute) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(q.dim);
  u[q.idx_one()] = 1.0;
  u[q.idx_z()] = cache[static_cast<size_t>(j)] ? 1.0 : 0.0;
  for (int i = 0; i < q.num_users; ++i) {
    u[q.idx_x(i)] = offload(i, j) ? 1.0 : 0.0;
    u[q.idx_f(i)] = compute(i, j);
    if (offload(i, j) && compute(i, j) > 0.0)
      u[q.idx_dbar(i)] = sp.cycles(i, j) / compute(i, j);
  }
  return u;
}

// The spec-exact relaxation: one PSD block per service plus the shared
// storage and compute budgets, binary-consistency equalities, the auxiliary
// delay inequalities, the z <= 1 cap, and the pinned corner entry.
inline SdpProblem relax_to_sdp(const QcqpInstance& q) {
  SdpProblem p;
  const int J = q.num_services, I = q.num_users, d = q.dim;
  p.block_sizes.assign(static_cast<size_t>(J), d);
  for (int j = 0; j < J; ++j) p.objective.push_back(q.blocks[static_cast<size_t>(j)].objective);

  for (int j = 0; j < J; ++j)
    for (int i = 0; i < I; ++i) {
      SdpConstraint c;
      c.sense = ConstraintSense::LessEqual;
      c.rhs = 0.0;
      c.terms.emplace_back(j, q.blocks[static_cast<size_t>(j)].offload_le_cache[static_cast<size_t>(i)]);
      p.constraints.push_back(std::move(c));
    }
  {
    SdpConstraint storage;
    storage.sense = ConstraintSense::LessEqual;
    storage.rhs = q.storage_capacity;
    for (int j = 0; j < J; ++j)
      storage.terms.emplace_back(j, q.blocks[static_cast<size_t>(j)].storage_term);
    p.constraints.push_back(std::move(storage));
    SdpConstraint compute;
    compute.sense = ConstraintSense::LessEqual;
    compute.rhs = q.compute_capacity;
    for (int j = 0; j < J; ++j)
      compute.terms.emplace_back(j, q.blocks[static_cast<size_t>(j)].compute_term);
    p.constraints.push_back(std::move(compute));
  }
  for (int j = 0; j < J; ++j) {
    for (int i = 0; i < I; ++i) {
      SdpConstraint c;
      c.sense = ConstraintSense::Equal;
      c.rhs = 0.0;
      c.terms.emplace_back(j, q.blocks[static_cast<size_t>(j)].binary_x[static_cast<size_t>(i)]);
      p.constraints.push_back(std::move(c));
    }
    SdpConstraint bz;
    bz.sense = ConstraintSense::Equal;
    bz.rhs = 0.0;
    bz.terms.emplace_back(j, q.blocks[static_cast<size_t>(j)].binary_z);
    p.constraints.push_back(std::move(bz));
    for (int i = 0; i < I; ++i) {
      SdpConstraint c;
      c.sense = ConstraintSense::LessEqual;
      c.rhs = 0.0;
      c.terms.emplace_back(j, q.blocks[static_cast<size_t>(j)].delay_aux[static_cast<size_t>(i)]);
      p.constraints.push_back(std::move(c));
    }
    Eigen::VectorXd b_cap = Eigen::VectorXd::Zero(d - 1);
    b_cap[q.idx_z()] = 1.0;
    SdpConstraint cap;
    cap.sense = ConstraintSense::LessEqual;
    cap.rhs = 1.0;
    cap.terms.emplace_back(j, sdr_detail::arrow(b_cap));
    p.constraints.push_back(std::move(cap));
    Eigen::MatrixXd corner = Eigen::MatrixXd::Zero(d, d);
    corner(q.idx_one(), q.idx_one()) = 1.0;
    SdpConstraint pin;
    pin.sense = ConstraintSense::Equal;
    pin.rhs = 1.0;
    pin.terms.emplace_back(j, corner);
    p.constraints.push_back(std::move(pin));
  }
  return p;
}

struct RelaxedDecisions {
  std::vector<double> cache_prob;  // per service, in [0,1]
  Grid<double> offload_prob;       // per (user, service); diagnostics only
};

struct ExtractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads the last row of each block: with the corner entry pinned to one it
// equals the (relaxed) coordinate vector itself.
inline RelaxedDecisions extract_relaxed_decisions(const std::vector<Eigen::MatrixXd>& blocks,
                                                  int num_users, int num_services,
                                                  double tol = 1e-6) {
  QcqpInstance layout;
  layout.num_users = num_users;
  layout.num_services = num_services;
  layout.dim = 3 * num_users + 2;
  RelaxedDecisions out;
  out.cache_prob.resize(static_cast<size_t>(num_services));
  out.offload_prob = Grid<double>(num_users, num_services);
  auto clamp01 = [&](double v, const char* what, int j) {
    if (v < -tol || v > 1.0 + tol)
      throw ExtractionError(std::string("relaxed ") + what + " outside [0,1] for service " +
                            std::to_string(j) + ": " + std::to_string(v));
    return std::min(std::max(v, 0.0), 1.0);
  };
  for (int j = 0; j < num_services; ++j) {
    const Eigen::MatrixXd& u = blocks[static_cast<size_t>(j)];
    const int last = layout.idx_one();
    if (std::abs(u(last, last) - 1.0) > tol)
      throw ExtractionError("corner entry of block " + std::to_string(j) +
                            " is not 1: " + std::to_string(u(last, last)));
    out.cache_prob[static_cast<size_t>(j)] = clamp01(u(last, layout.idx_z()), "cache", j);
    for (int i = 0; i < num_users; ++i)
      out.offload_prob(i, j) = clamp01(u(last, layout.idx_x(i)), "offload", j);
  }
  return out;
}

struct CacheSample {
  std::vector<uint8_t> cache;
  std::vector<uint8_t> download;
};

struct SampleSet {
  std::vector<CacheSample> samples;
};

// K independent Bernoulli draws from the relaxed caching probabilities;
// storage-infeasible draws are repaired by removing uniformly-chosen cached
// services until they fit. Downloads follow the per-service case rule.
inline SampleSet sample_and_repair(const std::vector<double>& cache_prob, int k,
                                   std::mt19937_64& rng, const std::vector<double>& sizes,
                                   double storage_capacity, const std::vector<CacheCase>& tags) {
  const size_t J = cache_prob.size();
  SampleSet out;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int s = 0; s < k; ++s) {
    CacheSample sample;
    sample.cache.resize(J);
    sample.download.resize(J);
    double used = 0.0;
    for (size_t j = 0; j < J; ++j) {
      sample.cache[j] = coin(rng) < cache_prob[j] ? 1 : 0;
      if (sample.cache[j]) used += sizes[j];
    }
    while (used > storage_capacity) {
      std::vector<size_t> cached;
      for (size_t j = 0; j < J; ++j)
        if (sample.cache[j]) cached.push_back(j);
      std::uniform_int_distribution<size_t> pick(0, cached.size() - 1);
      size_t victim = cached[pick(rng)];
      sample.cache[victim] = 0;
      used -= sizes[victim];
    }
    for (size_t j = 0; j < J; ++j)
      sample.download[j] = derive_download(tags[j], sample.cache[j] != 0) ? 1 : 0;
    out.samples.push_back(std::move(sample));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Solve pipeline: conditioning, optional elimination of idle-user
// coordinates, solve, extraction.

struct SdrOptions {
  int num_samples = 16;
  bool reduce_idle_users = true;  // value-preserving; see tests
  bool skip_trivial = true;       // no tasks and no negative gains: cache nothing
  SdpOptions solver;
};

struct SdrOutcome {
  bool solved = false;  // false when the trivial skip fired
  SolveStatus status = SolveStatus::Success;
  double objective_value = 0.0;  // in original units
  SolveCertificate certificate;
  RelaxedDecisions relaxed;
  SampleSet samples;
};

namespace sdr_detail {

// Diagonal congruence bringing every lifted coordinate to O(1): compute
// rates are measured in units of the capacity and auxiliary delays in units
// of the worst single-task full-capacity delay times I.
struct Scaling {
  double f_scale = 1.0;
  double d_scale = 1.0;
  double objective_scale = 1.0;
};

inline Scaling make_scaling(const SlotSubproblem& sp) {
  Scaling s;
  s.f_scale = sp.compute_capacity;
  double max_cycles = 0.0;
  for (double c : sp.cycles.data) max_cycles = std::max(max_cycles, c);
  s.d_scale = std::max(1.0, max_cycles / sp.compute_capacity * sp.num_users);
  return s;
}

inline Eigen::VectorXd scale_vector(const QcqpInstance& q, const Scaling& s) {
  Eigen::VectorXd d = Eigen::VectorXd::Ones(q.dim);
  for (int i = 0; i < q.num_users; ++i) {
    d[q.idx_f(i)] = s.f_scale;
    d[q.idx_dbar(i)] = s.d_scale;
  }
  return d;
}

}  // namespace sdr_detail

// Assembles the relaxation the solver actually sees: scaled coordinates,
// normalized objective, and (optionally) per-block elimination of the
// coordinates of users with no task for that service. The elimination is
// exactly value-preserving: eliminated offload/compute/delay coordinates are
// zero in some optimal solution of both the QCQP and its relaxation, and
// zero-extending any reduced-feasible point stays feasible.
struct AssembledRelaxation {
  SdpProblem problem;
  std::vector<std::vector<int>> kept;  // per block: original coordinate indices
  double objective_scale = 1.0;
};

inline AssembledRelaxation assemble_relaxation(const QcqpInstance& q, const SlotSubproblem& sp,
                                               bool reduce_idle_users) {
  using namespace sdr_detail;
  const int I = q.num_users, J = q.num_services, d = q.dim;
  Scaling scaling = make_scaling(sp);
  Eigen::VectorXd dvec = scale_vector(q, scaling);

  double max_coeff = 0.0;
  for (const QcqpServiceBlock& blk : q.blocks)
    for (int t = 0; t < blk.objective_vec.size(); ++t)
      max_coeff = std::max(max_coeff, std::abs(blk.objective_vec[t]) *
                                          (t < d - 1 ? dvec[t] : 1.0));
  double obj_scale = max_coeff > 0.0 ? max_coeff : 1.0;

  AssembledRelaxation out;
  out.objective_scale = obj_scale;
  for (int j = 0; j < J; ++j) {
    std::vector<int> keep;
    keep.push_back(q.idx_z());
    for (int i = 0; i < I; ++i) {
      if (reduce_idle_users && !(sp.cycles(i, j) > 0.0)) continue;
      keep.push_back(q.idx_x(i));
    }
    for (int i = 0; i < I; ++i) {
      if (reduce_idle_users && !(sp.cycles(i, j) > 0.0)) continue;
      keep.push_back(q.idx_f(i));
    }
    for (int i = 0; i < I; ++i) {
      if (reduce_idle_users && !(sp.cycles(i, j) > 0.0)) continue;
      keep.push_back(q.idx_dbar(i));
    }
    keep.push_back(q.idx_one());
    out.kept.push_back(std::move(keep));
  }

  auto project = [&](int j, const Eigen::MatrixXd& m) {
    const auto& keep = out.kept[static_cast<size_t>(j)];
    const int n = static_cast<int>(keep.size());
    Eigen::MatrixXd r(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        r(a, b) = m(keep[static_cast<size_t>(a)], keep[static_cast<size_t>(b)]) *
                  dvec[keep[static_cast<size_t>(a)]] * dvec[keep[static_cast<size_t>(b)]];
    return r;
  };
  auto user_kept = [&](int j, int i) {
    return !reduce_idle_users || sp.cycles(i, j) > 0.0;
  };

  SdpProblem& p = out.problem;
  for (int j = 0; j < J; ++j) {
    p.block_sizes.push_back(static_cast<int>(out.kept[static_cast<size_t>(j)].size()));
    p.objective.push_back(project(j, q.blocks[static_cast<size_t>(j)].objective) / obj_scale);
  }
  for (int j = 0; j < J; ++j)
    for (int i = 0; i < I; ++i) {
      if (!user_kept(j, i)) continue;
      SdpConstraint c;
      c.sense = ConstraintSense::LessEqual;
      c.rhs = 0.0;
      c.terms.emplace_back(j, project(j, q.blocks[static_cast<size_t>(j)].offload_le_cache[static_cast<size_t>(i)]));
      p.constraints.push_back(std::move(c));
    }
  {
    SdpConstraint storage;
    storage.sense = ConstraintSense::LessEqual;
    storage.rhs = q.storage_capacity;
    for (int j = 0; j < J; ++j)
      storage.terms.emplace_back(j, project(j, q.blocks[static_cast<size_t>(j)].storage_term));
    p.constraints.push_back(std::move(storage));
    bool any_kept_user = false;
    for (int j = 0; j < J && !any_kept_user; ++j)
      for (int i = 0; i < I && !any_kept_user; ++i) any_kept_user = user_kept(j, i);
    if (any_kept_user) {
      SdpConstraint compute;
      compute.sense = ConstraintSense::LessEqual;
      compute.rhs = q.compute_capacity;
      for (int j = 0; j < J; ++j) {
        bool touches = false;
        for (int i = 0; i < I; ++i) touches = touches || user_kept(j, i);
        if (touches)
          compute.terms.emplace_back(j, project(j, q.blocks[static_cast<size_t>(j)].compute_term));
      }
      p.constraints.push_back(std::move(compute));
    }
  }
  for (int j = 0; j < J; ++j) {
    for (int i = 0; i < I; ++i) {
      if (!user_kept(j, i)) continue;
      SdpConstraint c;
      c.sense = ConstraintSense::Equal;
      c.rhs = 0.0;
      c.terms.emplace_back(j, project(j, q.blocks[static_cast<size_t>(j)].binary_x[static_cast<size_t>(i)]));
      p.constraints.push_back(std::move(c));
    }
    SdpConstraint bz;
    bz.sense = ConstraintSense::Equal;
    bz.rhs = 0.0;
    bz.terms.emplace_back(j, project(j, q.blocks[static_cast<size_t>(j)].binary_z));
    p.constraints.push_back(std::move(bz));
    for (int i = 0; i < I; ++i) {
      if (!user_kept(j, i)) continue;
      SdpConstraint c;
      c.sense = ConstraintSense::LessEqual;
      c.rhs = 0.0;
      c.terms.emplace_back(j, project(j, q.blocks[static_cast<size_t>(j)].delay_aux[static_cast<size_t>(i)]));
      p.constraints.push_back(std::move(c));
    }
    Eigen::VectorXd b_cap = Eigen::VectorXd::Zero(d - 1);
    b_cap[q.idx_z()] = 1.0;
    SdpConstraint cap;
    cap.sense = ConstraintSense::LessEqual;
    cap.rhs = 1.0;
    cap.terms.emplace_back(j, project(j, sdr_detail::arrow(b_cap)));
    p.constraints.push_back(std::move(cap));
    const auto& keep = out.kept[static_cast<size_t>(j)];
    Eigen::MatrixXd corner = Eigen::MatrixXd::Zero(static_cast<int>(keep.size()),
                                                   static_cast<int>(keep.size()));
    corner(static_cast<int>(keep.size()) - 1, static_cast<int>(keep.size()) - 1) = 1.0;
    SdpConstraint pin;
    pin.sense = ConstraintSense::Equal;
    pin.rhs = 1.0;
    pin.terms.emplace_back(j, corner);
    p.constraints.push_back(std::move(pin));
  }
  return out;
}

// Full optimization stage for one slot.
inline SdrOutcome run_optimization_stage(const SlotSubproblem& sp, const SdrOptions& options,
                                         std::mt19937_64& rng) {
  const int I = sp.num_users, J = sp.num_services;
  SdrOutcome out;

  bool any_task = false;
  for (double c : sp.cycles.data) any_task = any_task || c > 0.0;
  bool any_negative_gain = false;
  for (double g : sp.gain) any_negative_gain = any_negative_gain || g < 0.0;

  if (options.skip_trivial && !any_task && !any_negative_gain) {
    out.solved = false;
    out.status = SolveStatus::Success;
    out.relaxed.cache_prob.assign(static_cast<size_t>(J), 0.0);
    out.relaxed.offload_prob = Grid<double>(I, J);
    out.samples = sample_and_repair(out.relaxed.cache_prob, options.num_samples, rng, sp.size,
                                    sp.storage_capacity, sp.tag);
    return out;
  }

  QcqpInstance q = build_qcqp(sp);
  AssembledRelaxation ar = assemble_relaxation(q, sp, options.reduce_idle_users);
  SdpSolveResult res = SdpSolver::solve(ar.problem, options.solver);
  out.solved = true;
  out.status = res.status;
  out.certificate = res.certificate;
  out.objective_value = res.certificate.primal_objective * ar.objective_scale;

  // map reduced blocks back onto the full coordinate layout (eliminated
  // offload coordinates are zero by construction)
  std::vector<Eigen::MatrixXd> full_blocks;
  for (int j = 0; j < J; ++j) {
    const auto& keep = ar.kept[static_cast<size_t>(j)];
    Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(q.dim, q.dim);
    for (size_t a = 0; a < keep.size(); ++a)
      for (size_t b = 0; b < keep.size(); ++b)
        fb(keep[a], keep[b]) = res.primal[static_cast<size_t>(j)](static_cast<int>(a),
                                                                  static_cast<int>(b));
    full_blocks.push_back(std::move(fb));
  }
  out.relaxed = extract_relaxed_decisions(full_blocks, I, J);
  out.samples = sample_and_repair(out.relaxed.cache_prob, options.num_samples, rng, sp.size,
                                  sp.storage_capacity, sp.tag);
  return out;
}

// Labeled plain-text dump of a QCQP instance for external cross-checking.
inline void write_qcqp(std::ostream& os, const QcqpInstance& q) {
  os.precision(17);
  os << "qcqp-instance v1\n";
  os << "users " << q.num_users << " services " << q.num_services << " dim " << q.dim << "\n";
  os << "storage " << q.storage_capacity << " compute " << q.compute_capacity << "\n";
  auto dump = [&](const char* label, int j, int i, const Eigen::MatrixXd& m) {
    os << label << " service " << j;
    if (i >= 0) os << " user " << i;
    os << "\n";
    for (int r = 0; r < m.rows(); ++r) {
      for (int c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m(r, c);
      os << "\n";
    }
  };
  for (int j = 0; j < q.num_services; ++j) {
    const QcqpServiceBlock& blk = q.blocks[static_cast<size_t>(j)];
    dump("objective", j, -1, blk.objective);
    for (int i = 0; i < q.num_users; ++i) dump("offload-le-cache", j, i, blk.offload_le_cache[static_cast<size_t>(i)]);
    dump("storage-term", j, -1, blk.storage_term);
    dump("compute-term", j, -1, blk.compute_term);
    for (int i = 0; i < q.num_users; ++i) dump("binary-x", j, i, blk.binary_x[static_cast<size_t>(i)]);
    dump("binary-z", j, -1, blk.binary_z);
    for (int i = 0; i < q.num_users; ++i) dump("delay-aux", j, i, blk.delay_aux[static_cast<size_t>(i)]);
  }
  os << "end\n";
}

}  // namespace freshedge
