// Discrete-time environment: service/task generation, AoI and virtual-queue
// dynamics, and the slot-step transition. One instance is strictly
// sequential; run independent instances for parallel experiments.
#pragma once

#include <ostream>
#include <vector>

#include "freshedge/config.hpp"
#include "freshedge/delay_alloc.hpp"
#include "freshedge/rng.hpp"
#include "freshedge/types.hpp"

namespace freshedge {

// AoI of the service copy users receive this slot. The (cache=0, download=1)
// combination can never occur under the download/cache coupling rules.
inline double update_aoi(bool cache, bool download, double aoi_cs, double aoi_es_prev) {
  if (!cache && download)
    throw ConstraintViolation("coupling", "download=1 with cache=0");
  if (cache && download) return aoi_cs;
  if (cache && !download) return aoi_es_prev + 1.0;
  return aoi_cs;
}

// Virtual-queue recursion enforcing the long-term average AoI threshold.
inline double update_queue(double backlog, double aoi_es, double aoi_max) {
  return std::max(backlog - aoi_max + aoi_es, 0.0);
}

class Environment {
 public:
  explicit Environment(const EnvConfig& cfg) : cfg_(cfg) { reset(cfg.rng_seed); }

  void reset(uint64_t seed) {
    seed_ = seed;
    slot_ = 0;
    update_rng_ = make_stream(seed, "service_update");
    size_rng_ = make_stream(seed, "service_size");
    task_rng_ = make_stream(seed, "tasks");

    const int J = cfg_.num_services;
    services_.assign(static_cast<size_t>(J), ServiceState{});
    auto price_rng = make_stream(seed, "service_price");
    std::uniform_real_distribution<double> price(cfg_.purchase_price_min, cfg_.purchase_price_max);
    std::uniform_real_distribution<double> size(cfg_.service_size_min, cfg_.service_size_max);
    for (ServiceState& s : services_) {
      s.price_purchase = price(price_rng);
      s.price_refresh = cfg_.refresh_price_ratio * s.price_purchase;
      s.size = size(size_rng_);
      s.aoi_cs = 0.0;
      s.aoi_es = 0.0;  // uncached: tracks the CS copy
      s.cached = false;
    }
    auto thr_rng = make_stream(seed, "aoi_threshold");
    std::uniform_real_distribution<double> thr(cfg_.aoi_threshold_min, cfg_.aoi_threshold_max);
    aoi_max_.resize(static_cast<size_t>(J));
    for (double& a : aoi_max_) a = thr(thr_rng);

    queues_.backlog.assign(static_cast<size_t>(J), 0.0);
    tasks_ = generate_tasks(cfg_, task_rng_);
  }

  const EnvConfig& config() const { return cfg_; }
  int slot() const { return slot_; }
  uint64_t seed() const { return seed_; }
  const std::vector<ServiceState>& services() const { return services_; }
  const TaskBatch& tasks() const { return tasks_; }
  const QueueState& queues() const { return queues_; }
  const std::vector<double>& aoi_max() const { return aoi_max_; }

  // Fresh task batch: each user picks a service uniformly; upload size is a
  // truncated Gaussian, result size one tenth of it, cycles proportional.
  static TaskBatch generate_tasks(const EnvConfig& cfg, std::mt19937_64& rng) {
    TaskBatch batch(cfg.num_users, cfg.num_services);
    std::uniform_int_distribution<int> pick(0, cfg.num_services - 1);
    for (int i = 0; i < cfg.num_users; ++i) {
      int j = pick(rng);
      double su = sample_truncated_gaussian(rng, cfg.task_size_mean, cfg.task_size_std,
                                            cfg.task_size_min, cfg.task_size_max);
      batch.up_size(i, j) = su;
      batch.down_size(i, j) = su / 10.0;
      batch.cycles(i, j) = cfg.cycles_per_byte * su;
    }
    return batch;
  }

  // CS-side evolution: each service independently receives an update with
  // cs_update_prob (AoI resets at the start of that slot), sizes are
  // resampled every slot, prices are fixed after construction.
  static void advance_services(std::vector<ServiceState>& services, const EnvConfig& cfg,
                               std::mt19937_64& update_rng, std::mt19937_64& size_rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> size(cfg.service_size_min, cfg.service_size_max);
    for (ServiceState& s : services) {
      s.aoi_cs = (u(update_rng) < cfg.cs_update_prob) ? 0.0 : s.aoi_cs + 1.0;
      s.size = size(size_rng);
    }
  }

  // Validates the decision, applies costs and AoI/queue updates, then
  // advances the world to the next slot. Throws ConstraintViolation (with
  // the violated constraint's name) without touching state.
  SlotOutcome step(const SlotDecision& d) {
    validate_decision(d);

    CostBreakdown costs = slot_cost_and_utility(tasks_, d, services_, cfg_);
    const int J = cfg_.num_services;
    SlotOutcome out;
    out.cost = costs.cost;
    out.utility = costs.utility;
    out.delays = costs.delays;
    out.aoi_es_after.resize(static_cast<size_t>(J));
    out.queue_after.resize(static_cast<size_t>(J));
    for (int j = 0; j < J; ++j) {
      ServiceState& s = services_[static_cast<size_t>(j)];
      double aoi = update_aoi(d.cache[static_cast<size_t>(j)], d.download[static_cast<size_t>(j)],
                              s.aoi_cs, s.aoi_es);
      out.aoi_es_after[static_cast<size_t>(j)] = aoi;
      double q = update_queue(queues_.backlog[static_cast<size_t>(j)], aoi,
                              aoi_max_[static_cast<size_t>(j)]);
      out.queue_after[static_cast<size_t>(j)] = q;
      s.aoi_es = aoi;
      s.cached = d.cache[static_cast<size_t>(j)] != 0;
      queues_.backlog[static_cast<size_t>(j)] = q;
    }

    advance_services(services_, cfg_, update_rng_, size_rng_);
    tasks_ = generate_tasks(cfg_, task_rng_);
    ++slot_;
    return out;
  }

  // Feasibility checks shared by every policy's output.
  void validate_decision(const SlotDecision& d) const {
    const int I = cfg_.num_users, J = cfg_.num_services;
    const double tol = 1e-6;
    double storage = 0.0, compute = 0.0, bw_up = 0.0, bw_down = 0.0;
    for (int j = 0; j < J; ++j) {
      const size_t sj = static_cast<size_t>(j);
      if (d.cache[sj]) storage += services_[sj].size;
      const bool prev = services_[sj].cached;
      if (!prev && d.download[sj] != d.cache[sj])
        throw ConstraintViolation("coupling", "download must equal cache for service " +
                                                  std::to_string(j) + " not cached last slot");
      if (prev && d.download[sj] > d.cache[sj])
        throw ConstraintViolation("coupling", "download without caching for service " +
                                                  std::to_string(j));
      for (int i = 0; i < I; ++i) {
        if (d.offload(i, j) && !d.cache[sj])
          throw ConstraintViolation("offload-cache", "x=1 with z=0 for user " + std::to_string(i) +
                                                         ", service " + std::to_string(j));
        compute += d.compute(i, j);
        bw_up += d.bw_up(i, j);
        bw_down += d.bw_down(i, j);
      }
    }
    if (storage > cfg_.storage_capacity * (1.0 + tol))
      throw ConstraintViolation("storage", "cached bytes exceed capacity");
    if (compute > cfg_.compute_capacity * (1.0 + tol))
      throw ConstraintViolation("compute", "compute allocation exceeds capacity");
    if (bw_up > cfg_.uplink_bw * (1.0 + tol))
      throw ConstraintViolation("bandwidth", "uplink allocation exceeds budget");
    if (bw_down > cfg_.downlink_bw * (1.0 + tol))
      throw ConstraintViolation("bandwidth", "downlink allocation exceeds budget");
  }

  // Trace rows for reproducibility-diffing: one per (slot, user) and one per
  // (slot, service). Headers include the per-run AoI thresholds.
  void write_trace_headers(std::ostream& tasks_csv, std::ostream& services_csv) const {
    tasks_csv << "# freshedge task trace seed=" << seed_ << "\n";
    tasks_csv << "slot,user,service,up_size,down_size,cycles\n";
    services_csv << "# freshedge service trace seed=" << seed_ << " aoi_max=";
    for (size_t j = 0; j < aoi_max_.size(); ++j)
      services_csv << (j ? ";" : "") << aoi_max_[j];
    services_csv << "\n";
    services_csv << "slot,service,size,price_purchase,price_refresh,aoi_cs,aoi_es_prev,cached_prev,queue\n";
  }

  void write_trace_rows(std::ostream& tasks_csv, std::ostream& services_csv) const {
    for (int i = 0; i < cfg_.num_users; ++i) {
      int j = tasks_.requested_service(i);
      if (j < 0) continue;
      tasks_csv << slot_ << ',' << i << ',' << j << ',' << tasks_.up_size(i, j) << ','
                << tasks_.down_size(i, j) << ',' << tasks_.cycles(i, j) << "\n";
    }
    for (int j = 0; j < cfg_.num_services; ++j) {
      const ServiceState& s = services_[static_cast<size_t>(j)];
      services_csv << slot_ << ',' << j << ',' << s.size << ',' << s.price_purchase << ','
                   << s.price_refresh << ',' << s.aoi_cs << ',' << s.aoi_es << ','
                   << (s.cached ? 1 : 0) << ',' << queues_.backlog[static_cast<size_t>(j)] << "\n";
    }
  }

 private:
  EnvConfig cfg_;
  uint64_t seed_ = 0;
  int slot_ = 0;
  std::vector<ServiceState> services_;
  std::vector<double> aoi_max_;
  TaskBatch tasks_;
  QueueState queues_;
  std::mt19937_64 update_rng_, size_rng_, task_rng_;
};

}  // namespace freshedge
