// Per-slot subproblem construction: drift coefficients, the effective
// cache gain with its three-case classification, the download rule, and the
// slot objective every decision policy minimizes.
#pragma once

#include <cmath>
#include <vector>

#include "freshedge/config.hpp"
#include "freshedge/delay_alloc.hpp"
#include "freshedge/env.hpp"
#include "freshedge/types.hpp"

namespace freshedge {

// Case (i): not cached last slot, downloading pays the purchase price.
// Case (ii): cached and refreshing is worth its price against the drift.
// Case (iii): cached but refreshing is not worthwhile; never download.
enum class CacheCase : uint8_t { FreshNeeded, RefreshWorthwhile, KeepStale };

struct DriftCoefficients {
  double h = 0.0;        // drift paid per slot of keeping the service stale
  double i_const = 0.0;  // decision-independent part of the drift bound
};

inline DriftCoefficients drift_coefficients(double backlog, double aoi_cs, double aoi_es_prev,
                                            double aoi_max) {
  const double stale = aoi_es_prev + 1.0;
  DriftCoefficients out;
  out.h = 0.5 * (stale * stale - aoi_cs * aoi_cs) + backlog * (stale - aoi_cs);
  out.i_const = 0.5 * (aoi_max * aoi_max + aoi_cs * aoi_cs) - backlog * (aoi_max - aoi_cs);
  return out;
}

struct CacheGain {
  CacheCase tag = CacheCase::FreshNeeded;
  double gain = 0.0;         // coefficient of z_j in the slot objective
  double price_effective = 0.0;  // price paid if the service is downloaded
};

inline CacheGain classify_and_gain(bool cached_prev, double price_purchase, double price_refresh,
                                   double h, double v, double lambda_p) {
  CacheGain out;
  if (!cached_prev) {
    out.tag = CacheCase::FreshNeeded;
    out.price_effective = price_purchase;
    out.gain = v * lambda_p * price_purchase;
  } else if (v * lambda_p * price_refresh - h < 0.0) {
    out.tag = CacheCase::RefreshWorthwhile;
    out.price_effective = price_refresh;
    out.gain = v * lambda_p * price_refresh;
  } else {
    out.tag = CacheCase::KeepStale;
    out.price_effective = price_refresh;
    out.gain = h;
  }
  return out;
}

inline bool derive_download(CacheCase tag, bool cache) {
  return tag == CacheCase::KeepStale ? false : cache;
}

// Everything a policy needs to decide one slot.
struct SlotSubproblem {
  int num_users = 0;
  int num_services = 0;
  double v = 0.0;
  double lambda_d = 0.0;
  double storage_capacity = 0.0;
  double compute_capacity = 0.0;

  std::vector<double> h;        // per service
  std::vector<double> i_const;  // per service
  std::vector<double> gain;     // per service
  std::vector<CacheCase> tag;   // per service
  std::vector<double> price_effective;
  std::vector<double> size;     // service sizes this slot

  Grid<double> task_value;   // per (user, service): backhaul+cloud delay cost plus computing cost
  Grid<double> cycles;       // task CPU demand; 0 where absent
  std::vector<int> requested;  // service requested by each user, -1 if idle

  bool has_task(int i, int j) const { return cycles(i, j) > 0.0; }
};

inline SlotSubproblem build_subproblem(const Environment& env) {
  const EnvConfig& cfg = env.config();
  const int I = cfg.num_users, J = cfg.num_services;
  SlotSubproblem sp;
  sp.num_users = I;
  sp.num_services = J;
  sp.v = cfg.lyapunov_v;
  sp.lambda_d = cfg.lambda_d;
  sp.storage_capacity = cfg.storage_capacity;
  sp.compute_capacity = cfg.compute_capacity;
  sp.h.resize(static_cast<size_t>(J));
  sp.i_const.resize(static_cast<size_t>(J));
  sp.gain.resize(static_cast<size_t>(J));
  sp.tag.resize(static_cast<size_t>(J));
  sp.price_effective.resize(static_cast<size_t>(J));
  sp.size.resize(static_cast<size_t>(J));
  sp.task_value = Grid<double>(I, J);
  sp.cycles = Grid<double>(I, J);
  sp.requested.assign(static_cast<size_t>(I), -1);

  for (int j = 0; j < J; ++j) {
    const size_t sj = static_cast<size_t>(j);
    const ServiceState& s = env.services()[sj];
    DriftCoefficients dc = drift_coefficients(env.queues().backlog[sj], s.aoi_cs, s.aoi_es,
                                              env.aoi_max()[sj]);
    sp.h[sj] = dc.h;
    sp.i_const[sj] = dc.i_const;
    CacheGain g = classify_and_gain(s.cached, s.price_purchase, s.price_refresh, dc.h,
                                    cfg.lyapunov_v, cfg.lambda_p);
    sp.gain[sj] = g.gain;
    sp.tag[sj] = g.tag;
    sp.price_effective[sj] = g.price_effective;
    sp.size[sj] = s.size;
  }
  const TaskBatch& tasks = env.tasks();
  for (int i = 0; i < I; ++i) {
    sp.requested[static_cast<size_t>(i)] = tasks.requested_service(i);
    for (int j = 0; j < J; ++j) {
      if (!tasks.present(i, j)) continue;
      const double su = tasks.up_size(i, j), sd = tasks.down_size(i, j);
      const double backhaul = (su + sd) / cfg.es_cs_rate;
      const double cloud = tasks.cycles(i, j) / cfg.cloud_rate_per_task;
      sp.task_value(i, j) = cfg.lambda_d * (backhaul + cloud) + cfg.lambda_c * cfg.lambda_s * su;
      sp.cycles(i, j) = tasks.cycles(i, j);
    }
  }
  return sp;
}

// Slot objective after the download rule eliminated y: sum of cache gains
// minus the value gained by local processing (net of ES processing delay).
// Smaller is better. Throws on infeasible (x,z,f) combinations.
inline double p2_objective(const SlotSubproblem& sp, const Grid<uint8_t>& offload,
                           const std::vector<uint8_t>& cache, const Grid<double>& compute) {
  const int I = sp.num_users, J = sp.num_services;
  double storage = 0.0, total_f = 0.0;
  double value = 0.0;
  for (int j = 0; j < J; ++j)
    if (cache[static_cast<size_t>(j)]) {
      storage += sp.size[static_cast<size_t>(j)];
      value += sp.gain[static_cast<size_t>(j)];
    }
  if (storage > sp.storage_capacity * (1.0 + 1e-9))
    throw ConstraintViolation("storage", "p2 objective on storage-infeasible cache set");
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) {
      total_f += compute(i, j);
      if (!offload(i, j)) continue;
      if (!cache[static_cast<size_t>(j)])
        throw ConstraintViolation("offload-cache", "p2 objective with x=1, z=0");
      if (!sp.has_task(i, j)) continue;
      if (!(compute(i, j) > 0.0))
        throw ConstraintViolation("allocation", "x=1 with zero compute rate");
      value -= sp.v * (sp.task_value(i, j) - sp.lambda_d * sp.cycles(i, j) / compute(i, j));
    }
  if (total_f > sp.compute_capacity * (1.0 + 1e-9))
    throw ConstraintViolation("compute", "p2 objective on compute-infeasible allocation");
  return value;
}

}  // namespace freshedge
