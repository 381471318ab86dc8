// Delay formulas and the closed-form communication/computing resource
// allocations. Everything here is a pure function of its arguments.
#pragma once

#include <cmath>
#include <stdexcept>

#include "freshedge/config.hpp"
#include "freshedge/types.hpp"

namespace freshedge {

struct BandwidthAllocation {
  Grid<double> up;    // Hz
  Grid<double> down;  // Hz
};

// Square-root proportional split of the uplink/downlink budgets over the
// present tasks; minimizes total transmission delay. Tasks with zero size
// get zero bandwidth and are excluded from the normalizing sums.
inline BandwidthAllocation allocate_bandwidth(const TaskBatch& tasks, const EnvConfig& cfg) {
  const int I = tasks.users(), J = tasks.services();
  BandwidthAllocation alloc{Grid<double>(I, J), Grid<double>(I, J)};
  double norm_up = 0.0, norm_down = 0.0;
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) {
      if (!tasks.present(i, j)) continue;
      norm_up += std::sqrt(tasks.up_size(i, j) / cfg.eta_up(i));
      if (tasks.down_size(i, j) > 0.0)
        norm_down += std::sqrt(tasks.down_size(i, j) / cfg.eta_down(i));
    }
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) {
      if (!tasks.present(i, j)) continue;
      alloc.up(i, j) = cfg.uplink_bw * std::sqrt(tasks.up_size(i, j) / cfg.eta_up(i)) / norm_up;
      if (tasks.down_size(i, j) > 0.0)
        alloc.down(i, j) =
            cfg.downlink_bw * std::sqrt(tasks.down_size(i, j) / cfg.eta_down(i)) / norm_down;
    }
  return alloc;
}

// Square-root proportional split of the ES computing capacity over the tasks
// selected for local processing; minimizes total processing delay.
inline Grid<double> allocate_compute(const Grid<double>& cycles, const Grid<uint8_t>& offload,
                                     double capacity) {
  const int I = cycles.rows, J = cycles.cols;
  Grid<double> f(I, J);
  double norm = 0.0;
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j)
      if (offload(i, j) && cycles(i, j) > 0.0) norm += std::sqrt(cycles(i, j));
  if (norm == 0.0) return f;
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j)
      if (offload(i, j) && cycles(i, j) > 0.0)
        f(i, j) = capacity * std::sqrt(cycles(i, j)) / norm;
  return f;
}

inline Grid<double> allocate_compute(const TaskBatch& tasks, const Grid<uint8_t>& offload,
                                     double capacity) {
  return allocate_compute(tasks.cycles, offload, capacity);
}

namespace detail {
inline void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw ConstraintViolation("allocation", std::string(what) + " must be > 0 for a present task");
}
}  // namespace detail

// Delay when user i's task is processed at the ES: uplink + processing + downlink.
inline double local_delay(double up_size, double down_size, double cycles, double bw_up,
                          double bw_down, double compute, double eta_up, double eta_down) {
  detail::require_positive(bw_up, "uplink bandwidth");
  detail::require_positive(compute, "compute rate");
  double d = up_size / (eta_up * bw_up) + cycles / compute;
  if (down_size > 0.0) {
    detail::require_positive(bw_down, "downlink bandwidth");
    d += down_size / (eta_down * bw_down);
  }
  return d;
}

// Delay when the task is forwarded to the CS: uplink + backhaul + cloud
// processing + downlink.
inline double offload_delay(double up_size, double down_size, double cycles, double bw_up,
                            double bw_down, double es_cs_rate, double cloud_rate, double eta_up,
                            double eta_down) {
  detail::require_positive(bw_up, "uplink bandwidth");
  double d = up_size / (eta_up * bw_up) + (up_size + down_size) / es_cs_rate + cycles / cloud_rate;
  if (down_size > 0.0) {
    detail::require_positive(bw_down, "downlink bandwidth");
    d += down_size / (eta_down * bw_down);
  }
  return d;
}

struct CostBreakdown {
  double cost = 0.0;              // weighted total the ES pays this slot
  double cost_all_offload = 0.0;  // same total if every task were forwarded and nothing downloaded
  double utility = 0.0;           // cost_all_offload - cost
  double delay_cost = 0.0;
  double compute_cost = 0.0;
  double price_cost = 0.0;
  Grid<double> delays;        // seconds per (user, service)
};

// Per-slot cost, its all-offload baseline, and the utility (their gap).
// cached_prev selects between purchasing and refreshing prices.
inline CostBreakdown slot_cost_and_utility(const TaskBatch& tasks, const SlotDecision& d,
                                           const std::vector<ServiceState>& services,
                                           const EnvConfig& cfg) {
  const int I = tasks.users(), J = tasks.services();
  CostBreakdown out;
  out.delays = Grid<double>(I, J);
  double utility_tasks = 0.0;
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      if (!tasks.present(i, j)) continue;
      const double su = tasks.up_size(i, j), sd = tasks.down_size(i, j), cy = tasks.cycles(i, j);
      const double d_off = offload_delay(su, sd, cy, d.bw_up(i, j), d.bw_down(i, j),
                                         cfg.es_cs_rate, cfg.cloud_rate_per_task,
                                         cfg.eta_up(i), cfg.eta_down(i));
      double delay = d_off;
      if (d.offload(i, j)) {
        delay = local_delay(su, sd, cy, d.bw_up(i, j), d.bw_down(i, j), d.compute(i, j),
                            cfg.eta_up(i), cfg.eta_down(i));
        utility_tasks += cfg.lambda_d * (d_off - delay) + cfg.lambda_c * cfg.lambda_s * su;
      } else {
        out.compute_cost += cfg.lambda_c * cfg.lambda_s * su;
      }
      out.delays(i, j) = delay;
      out.delay_cost += cfg.lambda_d * delay;
      out.cost_all_offload += cfg.lambda_d * d_off + cfg.lambda_c * cfg.lambda_s * su;
    }
  }
  double price_paid = 0.0;
  for (int j = 0; j < J; ++j) {
    if (!d.download[static_cast<size_t>(j)]) continue;
    const ServiceState& s = services[static_cast<size_t>(j)];
    price_paid += cfg.lambda_p * (s.cached ? s.price_refresh : s.price_purchase);
  }
  out.price_cost = price_paid;
  out.cost = out.delay_cost + out.compute_cost + price_paid;
  out.utility = utility_tasks - price_paid;
  return out;
}

}  // namespace freshedge
