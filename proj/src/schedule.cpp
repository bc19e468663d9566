#include "acsim/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace acsim {

void SchedulePlan::validate() const {
  if (head_only_iters < 0 || warmup_iters < 0 || main_iters < 0)
    throw std::invalid_argument("SchedulePlan: iteration counts must be >= 0");
  if (!(eta_min < eta_max))
    throw std::invalid_argument("SchedulePlan: eta_min must be < eta_max");
  if (!(alpha > 0.0))
    throw std::invalid_argument("SchedulePlan: alpha must be > 0");
}

SchedulePlan SchedulePlan::for_total(std::int64_t total) {
  if (total < 1)
    throw std::invalid_argument("SchedulePlan::for_total: total must be >= 1");
  SchedulePlan plan;
  plan.head_only_iters = total / 20;
  plan.warmup_iters = total / 20;
  plan.main_iters = total - plan.head_only_iters - plan.warmup_iters;
  return plan;
}

double lr_main(std::int64_t t_cur, const SchedulePlan& plan) {
  if (t_cur < 0 || t_cur > plan.main_iters)
    throw std::out_of_range("lr_main: T_cur outside [0, T_max]");
  if (t_cur == 0)
    return plan.eta_max;
  if (t_cur == plan.main_iters)
    return plan.eta_min;
  const double progress =
      static_cast<double>(t_cur) / static_cast<double>(plan.main_iters);
  return plan.eta_min + 0.5 * (plan.eta_max - plan.eta_min) *
                            (1.0 + std::cos(std::pow(progress, plan.alpha) * M_PI));
}

ScheduleStage stage_at(std::int64_t t, const SchedulePlan& plan) {
  if (t < 0 || t > plan.total_iters())
    throw std::out_of_range("stage_at: iteration outside the plan");
  if (t < plan.head_only_iters)
    return ScheduleStage::HeadOnly;
  if (t < plan.head_only_iters + plan.warmup_iters)
    return ScheduleStage::Warmup;
  return ScheduleStage::Main;
}

double lr_at(std::int64_t t, const SchedulePlan& plan) {
  switch (stage_at(t, plan)) {
  case ScheduleStage::HeadOnly:
    return plan.head_lr;
  case ScheduleStage::Warmup: {
    // Half-cosine rise from eta_min to eta_max; the endpoint t_w=warmup_iters
    // belongs to the main stage and equals eta_max there, so the handoff is
    // continuous.
    const std::int64_t t_w = t - plan.head_only_iters;
    const double progress =
        static_cast<double>(t_w) / static_cast<double>(plan.warmup_iters);
    return plan.eta_min + 0.5 * (plan.eta_max - plan.eta_min) *
                              (1.0 - std::cos(progress * M_PI));
  }
  case ScheduleStage::Main:
    return lr_main(t - plan.head_only_iters - plan.warmup_iters, plan);
  }
  throw std::logic_error("lr_at: unreachable");
}

std::string to_string(ScheduleStage stage) {
  switch (stage) {
  case ScheduleStage::HeadOnly:
    return "head_only";
  case ScheduleStage::Warmup:
    return "warmup";
  case ScheduleStage::Main:
    return "main";
  }
  return "unknown";
}

} // namespace acsim
