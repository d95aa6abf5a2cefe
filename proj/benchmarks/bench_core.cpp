#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "fpcaload/calendar.hpp"
#include "fpcaload/curves.hpp"
#include "fpcaload/fpca.hpp"
#include "fpcaload/metrics.hpp"
#include "fpcaload/pipeline.hpp"
#include "fpcaload/regress.hpp"

using namespace fpcaload;

namespace {

// Daily profiles with a weekly and a yearly cycle plus noise.
CurveSet make_curves(std::size_t days, std::size_t m) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 0.02);
  const Date first = make_date(2014, 1, 1);
  std::vector<DailyCurve> curves;
  curves.reserve(days);
  for (std::size_t d = 0; d < days; ++d) {
    const Date date = add_days(first, static_cast<int>(d));
    const double week = iso_weekday(date) >= 6 ? 0.7 : 1.0;
    const double season = 1.0 + 0.2 * std::cos(2.0 * std::numbers::pi * d / 365.25);
    std::vector<double> v(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double phase = 2.0 * std::numbers::pi * j / m;
      v[j] = 0.6 + week * season * (0.3 - 0.25 * std::cos(phase)) + noise(rng);
    }
    curves.push_back({date, std::move(v), "bench"});
  }
  return CurveSet(TimeGrid::uniform(m), std::move(curves));
}

std::vector<Date> dates_of(const CurveSet &set) {
  std::vector<Date> out;
  for (const auto &c : set.curves()) out.push_back(c.date);
  return out;
}

void BM_FpcaFit(benchmark::State &state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const CurveSet set = make_curves(730, m);
  for (auto _ : state) {
    auto result = fit(set, std::min<std::size_t>(m, 8));
    benchmark::DoNotOptimize(result.model.eigenvalues.data());
  }
}
BENCHMARK(BM_FpcaFit)->Arg(12)->Arg(24)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_Stepwise(benchmark::State &state) {
  const auto days = static_cast<std::size_t>(state.range(0));
  const CurveSet set = make_curves(days, 24);
  const auto fitted = fit(set, 1);
  const auto dates = dates_of(set);
  const auto descriptors = build_day_descriptors(dates, {}, dates.front());
  std::vector<double> y(fitted.scores.scores.rows());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = fitted.scores.scores(i, 0);
  const DesignSpec pool = DesignSpec::standard();
  for (auto _ : state) {
    auto model = stepwise_select(descriptors, y, pool);
    benchmark::DoNotOptimize(model.aic);
  }
}
BENCHMARK(BM_Stepwise)->Arg(365)->Arg(730)->Unit(benchmark::kMillisecond);

void BM_Mape(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = 1.0 + 0.5 * std::sin(0.01 * i);
    b[i] = a[i] * 1.03;
  }
  for (auto _ : state) benchmark::DoNotOptimize(mape(a, b));
}
BENCHMARK(BM_Mape)->Arg(24 * 365);

} // namespace

BENCHMARK_MAIN();
