// Core domain types shared across the library.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace freshedge {

struct ConstraintViolation : std::runtime_error {
  std::string constraint;
  ConstraintViolation(std::string which, const std::string& detail)
      : std::runtime_error("constraint violated: " + which + " (" + detail + ")"),
        constraint(std::move(which)) {}
};

// Dense row-major user-by-service grid.
template <typename T>
struct Grid {
  int rows = 0, cols = 0;
  std::vector<T> data;

  Grid() = default;
  Grid(int r, int c, T fill = T{}) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}
  T& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  const T& operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }
  bool operator==(const Grid&) const = default;
};

struct ServiceState {
  double size = 0.0;            // bytes, resampled each slot
  double price_purchase = 0.0;  // paid when downloading a service not cached last slot
  double price_refresh = 0.0;   // paid when refreshing an already-cached service
  double aoi_cs = 0.0;          // slots since the CS copy was generated
  double aoi_es = 0.0;          // slots since the version users actually receive was generated
  bool cached = false;          // cached at the ES at the end of the previous slot
};

// One slot's worth of task arrivals. At most one service per user; absent
// tasks have all three fields zero.
struct TaskBatch {
  Grid<double> up_size;    // bytes
  Grid<double> down_size;  // bytes
  Grid<double> cycles;     // CPU cycles

  TaskBatch() = default;
  TaskBatch(int users, int services)
      : up_size(users, services), down_size(users, services), cycles(users, services) {}

  int users() const { return up_size.rows; }
  int services() const { return up_size.cols; }
  bool present(int i, int j) const { return up_size(i, j) > 0.0; }

  // Service requested by user i, or -1 when the user is idle this slot.
  int requested_service(int i) const {
    for (int j = 0; j < services(); ++j)
      if (present(i, j)) return j;
    return -1;
  }
};

struct QueueState {
  std::vector<double> backlog;  // one virtual queue per service, always >= 0
};

struct SlotDecision {
  Grid<uint8_t> offload;   // x_ij: 1 = process at the ES
  std::vector<uint8_t> download;  // y_j
  std::vector<uint8_t> cache;     // z_j
  Grid<double> bw_up;      // Hz
  Grid<double> bw_down;    // Hz
  Grid<double> compute;    // cycles/s

  SlotDecision() = default;
  SlotDecision(int users, int services)
      : offload(users, services),
        download(static_cast<size_t>(services), 0),
        cache(static_cast<size_t>(services), 0),
        bw_up(users, services),
        bw_down(users, services),
        compute(users, services) {}
};

struct SlotOutcome {
  double cost = 0.0;     // weighted delay + computing + purchasing/refreshing
  double utility = 0.0;  // cost saved relative to offloading everything
  Grid<double> delays;   // seconds, per (user, service); 0 where no task
  std::vector<double> aoi_es_after;
  std::vector<double> queue_after;
};

inline bool nearly_equal(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace freshedge
