// Shared test helpers: random environments, random slot subproblems, and a
// tiny brute-force minimizer used as the reference for the slot objective.
#pragma once

#include <limits>
#include <random>
#include <vector>

#include "freshedge/delay_alloc.hpp"
#include "freshedge/env.hpp"
#include "freshedge/lyapunov.hpp"

namespace freshedge_test {

inline freshedge::EnvConfig desk_config(int users, int services, uint64_t seed = 1) {
  freshedge::EnvConfig cfg = freshedge::default_config();
  cfg.num_users = users;
  cfg.num_services = services;
  cfg.rng_seed = seed;
  cfg.spectral_eff_up.assign(static_cast<size_t>(users), 3.0 / 8.0);
  cfg.spectral_eff_down.assign(static_cast<size_t>(users), 4.0 / 8.0);
  return cfg;
}

// Walks a fresh environment a few slots under a randomized feasible policy so
// queues, AoI values, and cache states are non-trivial, then returns the
// subproblem of the slot it stopped at.
inline freshedge::SlotSubproblem random_env_subproblem(int users, int services, uint64_t seed,
                                                       freshedge::Environment* keep_env = nullptr) {
  using namespace freshedge;
  EnvConfig cfg = desk_config(users, services, seed);
  Environment env(cfg);
  auto rng = make_stream(seed, "warmup_policy");
  const int warmup = 3 + static_cast<int>(rng() % 6);
  for (int t = 0; t < warmup; ++t) {
    SlotDecision d(cfg.num_users, cfg.num_services);
    auto bw = allocate_bandwidth(env.tasks(), cfg);
    d.bw_up = bw.up;
    d.bw_down = bw.down;
    double storage = 0.0;
    for (int j = 0; j < cfg.num_services; ++j) {
      const size_t sj = static_cast<size_t>(j);
      bool prev = env.services()[sj].cached;
      bool want = (rng() % 2) == 0;
      if (want && storage + env.services()[sj].size <= cfg.storage_capacity) {
        storage += env.services()[sj].size;
        d.cache[sj] = 1;
        d.download[sj] = prev ? (rng() % 2) : 1;
      }
    }
    for (int i = 0; i < cfg.num_users; ++i) {
      int j = env.tasks().requested_service(i);
      if (j >= 0 && d.cache[static_cast<size_t>(j)] && rng() % 2) d.offload(i, j) = 1;
    }
    d.compute = allocate_compute(env.tasks(), d.offload, cfg.compute_capacity);
    env.step(d);
  }
  SlotSubproblem sp = build_subproblem(env);
  if (keep_env) *keep_env = env;
  return sp;
}

struct BruteForceResult {
  double value = std::numeric_limits<double>::infinity();
  std::vector<uint8_t> cache;
  freshedge::Grid<uint8_t> offload;
};

// Exhaustive minimization of the slot objective over feasible (z, x) with the
// closed-form compute split, iterating masks in increasing order so the
// lexicographically-smallest minimizer wins ties.
inline BruteForceResult brute_force_p2(const freshedge::SlotSubproblem& sp) {
  using namespace freshedge;
  const int I = sp.num_users, J = sp.num_services;
  BruteForceResult best;
  best.cache.assign(static_cast<size_t>(J), 0);
  best.offload = Grid<uint8_t>(I, J);
  std::vector<int> active;  // users with a task this slot
  for (int i = 0; i < I; ++i)
    if (sp.requested[static_cast<size_t>(i)] >= 0) active.push_back(i);

  for (uint32_t zmask = 0; zmask < (1u << J); ++zmask) {
    double storage = 0.0, gain = 0.0;
    for (int j = 0; j < J; ++j)
      if (zmask & (1u << j)) {
        storage += sp.size[static_cast<size_t>(j)];
        gain += sp.gain[static_cast<size_t>(j)];
      }
    if (storage > sp.storage_capacity) continue;
    for (uint32_t xmask = 0; xmask < (1u << active.size()); ++xmask) {
      bool ok = true;
      double sum_sqrt = 0.0, linear = 0.0;
      for (size_t k = 0; k < active.size(); ++k) {
        if (!(xmask & (1u << k))) continue;
        int i = active[k], j = sp.requested[static_cast<size_t>(i)];
        if (!(zmask & (1u << j))) {
          ok = false;
          break;
        }
        sum_sqrt += std::sqrt(sp.cycles(i, j));
        linear += sp.task_value(i, j);
      }
      if (!ok) continue;
      double value = gain - sp.v * (linear - sp.lambda_d * sum_sqrt * sum_sqrt / sp.compute_capacity);
      if (value < best.value - 1e-15) {
        best.value = value;
        for (int j = 0; j < J; ++j) best.cache[static_cast<size_t>(j)] = (zmask >> j) & 1u;
        best.offload = Grid<uint8_t>(I, J);
        for (size_t k = 0; k < active.size(); ++k)
          if (xmask & (1u << k)) {
            int i = active[k];
            best.offload(i, sp.requested[static_cast<size_t>(i)]) = 1;
          }
      }
    }
  }
  return best;
}

}  // namespace freshedge_test
