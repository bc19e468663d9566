#pragma once

#include <cstdint>
#include <string>

namespace acsim {

// Three-stage learning-rate program: fixed head-only stage, half-cosine
// warmup, then the alpha-modified cosine decay. alpha > 1 keeps the schedule
// near eta_max for a larger fraction of the run.
struct SchedulePlan {
  std::int64_t head_only_iters = 0;
  std::int64_t warmup_iters = 0;
  std::int64_t main_iters = 0; // T_max
  double head_lr = 1e-2;
  double eta_min = 1e-5;
  double eta_max = 1e-3;
  double alpha = 1.5;

  void validate() const;
  std::int64_t total_iters() const {
    return head_only_iters + warmup_iters + main_iters;
  }

  // Sizes the default plan for a total iteration budget: 5% head-only,
  // 5% warmup, the rest main.
  static SchedulePlan for_total(std::int64_t total);
};

// eta(T_cur) = eta_min + (eta_max - eta_min)/2 * (1 + cos((T_cur/T_max)^alpha * pi)).
// T_cur must lie in [0, T_max].
double lr_main(std::int64_t t_cur, const SchedulePlan& plan);

enum class ScheduleStage { HeadOnly, Warmup, Main };

// Learning rate at global iteration t across all three stages. The warmup end
// meets the main stage start exactly (both equal eta_max). Throws when t is
// past the plan.
double lr_at(std::int64_t t, const SchedulePlan& plan);
ScheduleStage stage_at(std::int64_t t, const SchedulePlan& plan);

std::string to_string(ScheduleStage stage);

} // namespace acsim
