// Per-slot decision policies over a SlotSubproblem: the exhaustive oracle,
// SDP rounding, an alternating-descent heuristic seeded by the relaxation,
// and a fixed caching set. Learned policies live in ppo.hpp; each policy
// returns the (cache, download, offload) part of the decision, with compute
// rates filled in closed form.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "freshedge/delay_alloc.hpp"
#include "freshedge/lyapunov.hpp"
#include "freshedge/sdr.hpp"
#include "freshedge/types.hpp"

namespace freshedge {

enum class PolicyKind : uint8_t { Oiodrl, Optimal, PpoOnly, SdpOnly, Jscr, Fixed };

inline const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::Oiodrl: return "oiodrl";
    case PolicyKind::Optimal: return "optimal";
    case PolicyKind::PpoOnly: return "ppo_only";
    case PolicyKind::SdpOnly: return "sdp_only";
    case PolicyKind::Jscr: return "jscr";
    case PolicyKind::Fixed: return "fixed";
  }
  return "?";
}

inline PolicyKind policy_from_string(const std::string& s) {
  if (s == "oiodrl") return PolicyKind::Oiodrl;
  if (s == "optimal") return PolicyKind::Optimal;
  if (s == "ppo_only") return PolicyKind::PpoOnly;
  if (s == "sdp_only") return PolicyKind::SdpOnly;
  if (s == "jscr") return PolicyKind::Jscr;
  if (s == "fixed") return PolicyKind::Fixed;
  throw std::invalid_argument("unknown policy '" + s + "'");
}

// The discrete part of a slot decision; compute rates are implied by the
// closed-form split over the locally-processed tasks.
struct DecisionParts {
  std::vector<uint8_t> cache;
  std::vector<uint8_t> download;
  Grid<uint8_t> offload;
};

inline Grid<double> closed_form_compute(const SlotSubproblem& sp, const Grid<uint8_t>& offload) {
  return allocate_compute(sp.cycles, offload, sp.compute_capacity);
}

inline double evaluate_parts(const SlotSubproblem& sp, const DecisionParts& parts) {
  return p2_objective(sp, parts.offload, parts.cache, closed_form_compute(sp, parts.offload));
}

inline DecisionParts empty_parts(const SlotSubproblem& sp) {
  DecisionParts parts;
  parts.cache.assign(static_cast<size_t>(sp.num_services), 0);
  parts.download.assign(static_cast<size_t>(sp.num_services), 0);
  parts.offload = Grid<uint8_t>(sp.num_users, sp.num_services);
  return parts;
}

inline void derive_downloads(const SlotSubproblem& sp, DecisionParts& parts) {
  for (int j = 0; j < sp.num_services; ++j)
    parts.download[static_cast<size_t>(j)] =
        derive_download(sp.tag[static_cast<size_t>(j)], parts.cache[static_cast<size_t>(j)] != 0)
            ? 1
            : 0;
}

struct OracleResult {
  DecisionParts parts;
  double value = 0.0;
};

// Exhaustive minimization over storage-feasible cache sets and offloading
// subsets, with the compute split in closed form. Deterministic tie-break:
// masks are scanned in increasing numeric order and only strict improvements
// are accepted, so the smallest (cache-mask, offload-mask) minimizer wins.
inline OracleResult oracle_solve_p2(const SlotSubproblem& sp) {
  const int I = sp.num_users, J = sp.num_services;
  if (I + J > 22)
    throw std::invalid_argument("oracle_solve_p2: instance too large to enumerate (I+J > 22)");

  std::vector<int> active;
  for (int i = 0; i < I; ++i)
    if (sp.requested[static_cast<size_t>(i)] >= 0) active.push_back(i);
  const uint32_t zcount = 1u << J;

  // storage and gain sums via lowest-bit recurrences
  std::vector<double> storage(zcount, 0.0), gain(zcount, 0.0);
  for (uint32_t mask = 1; mask < zcount; ++mask) {
    uint32_t low = mask & (~mask + 1u);
    int j = std::countr_zero(low);
    storage[mask] = storage[mask ^ low] + sp.size[static_cast<size_t>(j)];
    gain[mask] = gain[mask ^ low] + sp.gain[static_cast<size_t>(j)];
  }
  const uint32_t xcount = 1u << active.size();
  std::vector<double> linear(xcount, 0.0), sqrt_cycles(xcount, 0.0);
  std::vector<uint32_t> needed_cache(xcount, 0);
  for (uint32_t mask = 1; mask < xcount; ++mask) {
    uint32_t low = mask & (~mask + 1u);
    int k = std::countr_zero(low);
    int i = active[static_cast<size_t>(k)];
    int j = sp.requested[static_cast<size_t>(i)];
    linear[mask] = linear[mask ^ low] + sp.task_value(i, j);
    sqrt_cycles[mask] = sqrt_cycles[mask ^ low] + std::sqrt(sp.cycles(i, j));
    needed_cache[mask] = needed_cache[mask ^ low] | (1u << j);
  }

  double best = std::numeric_limits<double>::infinity();
  uint32_t best_z = 0, best_x = 0;
  for (uint32_t zmask = 0; zmask < zcount; ++zmask) {
    if (storage[zmask] > sp.storage_capacity) continue;
    for (uint32_t xmask = 0; xmask < xcount; ++xmask) {
      if ((needed_cache[xmask] & ~zmask) != 0) continue;  // x <= z
      double s = sqrt_cycles[xmask];
      double value = gain[zmask] -
                     sp.v * (linear[xmask] - sp.lambda_d * s * s / sp.compute_capacity);
      if (value < best) {
        best = value;
        best_z = zmask;
        best_x = xmask;
      }
    }
  }

  OracleResult out;
  out.parts = empty_parts(sp);
  for (int j = 0; j < J; ++j) out.parts.cache[static_cast<size_t>(j)] = (best_z >> j) & 1u;
  for (size_t k = 0; k < active.size(); ++k)
    if (best_x & (1u << k)) {
      int i = active[k];
      out.parts.offload(i, sp.requested[static_cast<size_t>(i)]) = 1;
    }
  derive_downloads(sp, out.parts);
  out.value = best;
  return out;
}

namespace policy_detail {

inline void repair_storage_random(const SlotSubproblem& sp, DecisionParts& parts,
                                  std::mt19937_64& rng) {
  double used = 0.0;
  for (int j = 0; j < sp.num_services; ++j)
    if (parts.cache[static_cast<size_t>(j)]) used += sp.size[static_cast<size_t>(j)];
  while (used > sp.storage_capacity) {
    std::vector<int> cached;
    for (int j = 0; j < sp.num_services; ++j)
      if (parts.cache[static_cast<size_t>(j)]) cached.push_back(j);
    std::uniform_int_distribution<size_t> pick(0, cached.size() - 1);
    int victim = cached[pick(rng)];
    parts.cache[static_cast<size_t>(victim)] = 0;
    used -= sp.size[static_cast<size_t>(victim)];
  }
}

inline void mask_offloads(const SlotSubproblem& sp, DecisionParts& parts) {
  for (int i = 0; i < sp.num_users; ++i)
    for (int j = 0; j < sp.num_services; ++j)
      if (parts.offload(i, j) && (!parts.cache[static_cast<size_t>(j)] || !sp.has_task(i, j)))
        parts.offload(i, j) = 0;
}

}  // namespace policy_detail

// Threshold-rounds the relaxation, repairs storage by random removal, and
// zeroes offloads that lost their cached service.
inline DecisionParts sdp_only_decide(const SlotSubproblem& sp, const RelaxedDecisions& relaxed,
                                     std::mt19937_64& rng) {
  DecisionParts parts = empty_parts(sp);
  for (int j = 0; j < sp.num_services; ++j)
    parts.cache[static_cast<size_t>(j)] = relaxed.cache_prob[static_cast<size_t>(j)] >= 0.5 ? 1 : 0;
  for (int i = 0; i < sp.num_users; ++i) {
    int j = sp.requested[static_cast<size_t>(i)];
    if (j >= 0 && relaxed.offload_prob(i, j) >= 0.5) parts.offload(i, j) = 1;
  }
  policy_detail::repair_storage_random(sp, parts, rng);
  policy_detail::mask_offloads(sp, parts);
  derive_downloads(sp, parts);
  return parts;
}

// Alternating single-flip descent seeded by rounding the relaxation down.
// Never accepts a non-improving move, so the objective is non-increasing and
// an oracle optimum is a fixed point.
inline DecisionParts jscr_decide(const SlotSubproblem& sp, const RelaxedDecisions& relaxed,
                                 std::mt19937_64& rng, int max_rounds = 50) {
  DecisionParts parts = empty_parts(sp);
  for (int j = 0; j < sp.num_services; ++j)
    parts.cache[static_cast<size_t>(j)] =
        relaxed.cache_prob[static_cast<size_t>(j)] >= 1.0 - 1e-6 ? 1 : 0;
  for (int i = 0; i < sp.num_users; ++i) {
    int j = sp.requested[static_cast<size_t>(i)];
    if (j >= 0 && relaxed.offload_prob(i, j) >= 0.5) parts.offload(i, j) = 1;
  }
  policy_detail::repair_storage_random(sp, parts, rng);
  policy_detail::mask_offloads(sp, parts);

  auto storage_used = [&](const DecisionParts& p) {
    double used = 0.0;
    for (int j = 0; j < sp.num_services; ++j)
      if (p.cache[static_cast<size_t>(j)]) used += sp.size[static_cast<size_t>(j)];
    return used;
  };
  double value = evaluate_parts(sp, parts);
  const double improve_eps = 1e-12 * (1.0 + std::abs(value));

  for (int round = 0; round < max_rounds; ++round) {
    bool improved = false;
    // best single caching flip, holding offloads (minus those invalidated)
    {
      double best_value = value;
      int best_j = -1;
      DecisionParts best_parts = parts;
      for (int j = 0; j < sp.num_services; ++j) {
        DecisionParts trial = parts;
        const size_t sj = static_cast<size_t>(j);
        if (trial.cache[sj]) {
          trial.cache[sj] = 0;
          for (int i = 0; i < sp.num_users; ++i) trial.offload(i, j) = 0;
        } else {
          trial.cache[sj] = 1;
          if (storage_used(trial) > sp.storage_capacity) continue;
        }
        double tv = evaluate_parts(sp, trial);
        if (tv < best_value - improve_eps) {
          best_value = tv;
          best_j = j;
          best_parts = trial;
        }
      }
      if (best_j >= 0) {
        parts = best_parts;
        value = best_value;
        improved = true;
      }
    }
    // greedy offloading flips, holding the cache set
    {
      bool flip_improved = true;
      while (flip_improved) {
        flip_improved = false;
        for (int i = 0; i < sp.num_users; ++i) {
          int j = sp.requested[static_cast<size_t>(i)];
          if (j < 0 || !parts.cache[static_cast<size_t>(j)]) continue;
          DecisionParts trial = parts;
          trial.offload(i, j) ^= 1;
          double tv = evaluate_parts(sp, trial);
          if (tv < value - improve_eps) {
            parts = trial;
            value = tv;
            flip_improved = true;
          }
        }
      }
    }
    if (!improved) break;
  }
  (void)rng;
  derive_downloads(sp, parts);
  return parts;
}

// Caches a fixed service set (dropping the largest member while the dynamic
// sizes exceed the budget) and serves exactly the requests inside the set.
inline DecisionParts fixed_decide(const SlotSubproblem& sp, const std::vector<int>& service_set) {
  DecisionParts parts = empty_parts(sp);
  for (int j : service_set) {
    if (j < 0 || j >= sp.num_services)
      throw std::invalid_argument("fixed policy: service index out of range");
    parts.cache[static_cast<size_t>(j)] = 1;
  }
  auto used = [&]() {
    double u = 0.0;
    for (int j = 0; j < sp.num_services; ++j)
      if (parts.cache[static_cast<size_t>(j)]) u += sp.size[static_cast<size_t>(j)];
    return u;
  };
  while (used() > sp.storage_capacity) {
    int largest = -1;
    for (int j = 0; j < sp.num_services; ++j)
      if (parts.cache[static_cast<size_t>(j)] &&
          (largest < 0 ||
           sp.size[static_cast<size_t>(j)] > sp.size[static_cast<size_t>(largest)]))
        largest = j;
    parts.cache[static_cast<size_t>(largest)] = 0;
  }
  for (int i = 0; i < sp.num_users; ++i) {
    int j = sp.requested[static_cast<size_t>(i)];
    if (j >= 0 && parts.cache[static_cast<size_t>(j)]) parts.offload(i, j) = 1;
  }
  derive_downloads(sp, parts);
  return parts;
}

// Assembles the full slot decision: policy parts plus the closed-form
// bandwidth and compute allocations.
inline SlotDecision assemble_decision(const SlotSubproblem& sp, const TaskBatch& tasks,
                                      const EnvConfig& cfg, const DecisionParts& parts) {
  SlotDecision d(sp.num_users, sp.num_services);
  d.cache = parts.cache;
  d.download = parts.download;
  d.offload = parts.offload;
  auto bw = allocate_bandwidth(tasks, cfg);
  d.bw_up = bw.up;
  d.bw_down = bw.down;
  d.compute = closed_form_compute(sp, parts.offload);
  return d;
}

}  // namespace freshedge
