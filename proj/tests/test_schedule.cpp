#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acsim/schedule.hpp"

using namespace acsim;

namespace {

SchedulePlan plan_with(double alpha, std::int64_t main_iters = 1000,
                       std::int64_t head = 0, std::int64_t warmup = 0) {
  SchedulePlan plan;
  plan.head_only_iters = head;
  plan.warmup_iters = warmup;
  plan.main_iters = main_iters;
  plan.alpha = alpha;
  return plan;
}

// Independent textbook cosine annealing for the alpha=1 cross-check.
double reference_cosine(std::int64_t t, std::int64_t t_max, double lo, double hi) {
  return lo + 0.5 * (hi - lo) *
                  (1.0 + std::cos(static_cast<double>(t) /
                                  static_cast<double>(t_max) * M_PI));
}

} // namespace

TEST_CASE("endpoints are exact") {
  const SchedulePlan plan = plan_with(1.5);
  CHECK(lr_main(0, plan) == plan.eta_max);
  CHECK(lr_main(plan.main_iters, plan) == plan.eta_min);
}

TEST_CASE("midpoint value matches the arbitrary-precision evaluation") {
  const SchedulePlan plan = plan_with(1.5, 1000);
  // eta_min + (eta_max-eta_min)/2 * (1 + cos(0.5^1.5 * pi)), 40-digit oracle.
  const double expected = 0.0007247878409614755;
  CHECK(std::abs(lr_main(500, plan) - expected) / expected <= 1e-14);
}

TEST_CASE("alpha=1 reduces to standard cosine annealing") {
  const SchedulePlan plan = plan_with(1.0, 777);
  for (std::int64_t t = 0; t <= plan.main_iters; ++t) {
    const double ref = reference_cosine(t, plan.main_iters, plan.eta_min, plan.eta_max);
    CHECK(std::abs(lr_main(t, plan) - ref) <= 1e-15 * ref);
  }
}

TEST_CASE("lr_main is monotone non-increasing and bounded") {
  for (double alpha : {0.5, 1.0, 1.5, 3.0}) {
    const SchedulePlan plan = plan_with(alpha, 10000);
    double prev = plan.eta_max;
    for (std::int64_t t = 0; t <= plan.main_iters; ++t) {
      const double lr = lr_main(t, plan);
      CHECK(lr <= prev + 1e-18);
      CHECK(lr >= plan.eta_min);
      CHECK(lr <= plan.eta_max);
      prev = lr;
    }
  }
}

TEST_CASE("alpha=1.5 dominates alpha=1 pointwise") {
  const SchedulePlan hi = plan_with(1.5, 10000);
  const SchedulePlan lo = plan_with(1.0, 10000);
  for (std::int64_t t = 1; t < 10000; ++t)
    CHECK(lr_main(t, hi) >= lr_main(t, lo));
}

TEST_CASE("out-of-range T_cur throws") {
  const SchedulePlan plan = plan_with(1.5, 100);
  CHECK_THROWS_AS(lr_main(-1, plan), std::out_of_range);
  CHECK_THROWS_AS(lr_main(101, plan), std::out_of_range);
}

TEST_CASE("three-stage program hits the documented anchors") {
  const SchedulePlan plan = plan_with(1.5, 800, 100, 100);
  CHECK(lr_at(0, plan) == 1e-2);
  CHECK(lr_at(99, plan) == 1e-2);
  CHECK(lr_at(100, plan) == doctest::Approx(1e-5).epsilon(1e-12)); // warmup start
  // Warmup end hands off continuously into the main stage at eta_max.
  CHECK(lr_at(200, plan) == plan.eta_max);
  CHECK(lr_at(200, plan) == lr_main(0, plan));
  CHECK(lr_at(plan.total_iters(), plan) == plan.eta_min);
  CHECK_THROWS_AS(lr_at(plan.total_iters() + 1, plan), std::out_of_range);
}

TEST_CASE("warmup rises monotonically from eta_min to eta_max") {
  const SchedulePlan plan = plan_with(1.5, 800, 0, 200);
  double prev = 0.0;
  for (std::int64_t t = 0; t < 200; ++t) {
    const double lr = lr_at(t, plan);
    CHECK(lr >= prev);
    CHECK(lr >= plan.eta_min);
    CHECK(lr <= plan.eta_max);
    prev = lr;
  }
}

TEST_CASE("default plan splits 5/5/90") {
  const SchedulePlan plan = SchedulePlan::for_total(10000);
  CHECK(plan.head_only_iters == 500);
  CHECK(plan.warmup_iters == 500);
  CHECK(plan.main_iters == 9000);
  CHECK(plan.total_iters() == 10000);
}

TEST_CASE("plan validation") {
  SchedulePlan plan = plan_with(0.0);
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
  plan = plan_with(1.5);
  plan.eta_min = plan.eta_max;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
}
