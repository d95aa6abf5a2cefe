#include <gtest/gtest.h>

#include <random>

#include "fpcaload/curves.hpp"
#include "fpcaload/error.hpp"

using namespace fpcaload;

namespace {

DailyCurve day(int offset, std::vector<double> values, std::string id = "e") {
  return {add_days(make_date(2020, 1, 1), offset), std::move(values), std::move(id)};
}

ErrorCode code_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

} // namespace

TEST(TimeGrid, RejectsBadPoints) {
  EXPECT_THROW(TimeGrid({0.0}), Error);
  EXPECT_THROW(TimeGrid({0.0, 0.0}), Error);
  EXPECT_THROW(TimeGrid({0.0, 24.0}), Error);
  EXPECT_THROW(TimeGrid({-1.0, 2.0}), Error);
  EXPECT_NO_THROW(TimeGrid({0.0, 0.5, 7.25}));
}

TEST(TimeGrid, SlotLookup) {
  const TimeGrid g = TimeGrid::hourly();
  EXPECT_EQ(g.slot_of(0.0), 0u);
  EXPECT_EQ(g.slot_of(0.99), 0u);
  EXPECT_EQ(g.slot_of(1.0), 1u);
  EXPECT_EQ(g.slot_of(23.75), 23u);
  const TimeGrid late({1.0, 12.0});
  EXPECT_FALSE(late.slot_of(0.5).has_value());
  EXPECT_EQ(late.slot_of(20.0), 1u);
}

TEST(CurveSet, SortsAndValidates) {
  const TimeGrid g({0.0, 12.0});
  const CurveSet s(g, {day(2, {1, 2}), day(0, {3, 4})});
  EXPECT_EQ(s[0].date, make_date(2020, 1, 1));
  EXPECT_EQ(code_of([&] { CurveSet(g, {day(0, {1, 2, 3})}); }), ErrorCode::GridMismatch);
  EXPECT_THROW(CurveSet(g, {day(0, {1, 2}), day(0, {1, 2})}), Error);
  EXPECT_THROW(CurveSet(g, {day(0, {1, 2}), day(1, {1, 2}, "other")}), Error);
  EXPECT_THROW(CurveSet(g, {day(0, {1, std::nan("")})}), Error);
}

TEST(Normalize, DirectRatio) {
  const CurveSet s(TimeGrid({0.0, 12.0}), {day(0, {400, 800})});
  const CurveSet n = normalize_by_max(s);
  EXPECT_DOUBLE_EQ(n[0].values[0], 0.5);
  EXPECT_EQ(n.scale(), 800.0);
}

TEST(Normalize, ConstantSetBecomesOnes) {
  const CurveSet s(TimeGrid({0.0, 8.0, 16.0}), {day(0, {7.3, 7.3, 7.3}), day(1, {7.3, 7.3, 7.3})});
  const CurveSet n = normalize_by_max(s);
  for (const auto &c : n.curves()) {
    for (double v : c.values) {
      EXPECT_EQ(v, 1.0);
    }
  }
}

TEST(Normalize, TwoCurveFixture) {
  const CurveSet s(TimeGrid::uniform(4), {day(0, {1, 2, 3, 4}), day(1, {2, 4, 6, 8})});
  const CurveSet n = normalize_by_max(s);
  EXPECT_EQ(n.scale(), 8.0);
  const std::vector<double> a{0.125, 0.25, 0.375, 0.5};
  const std::vector<double> b{0.25, 0.5, 0.75, 1.0};
  EXPECT_EQ(n[0].values, a);
  EXPECT_EQ(n[1].values, b);
}

TEST(Normalize, Errors) {
  EXPECT_EQ(code_of([] { normalize_by_max(CurveSet(TimeGrid::uniform(2), {})); }), ErrorCode::EmptySet);
  EXPECT_EQ(code_of([] { normalize_by_max(CurveSet(TimeGrid::uniform(2), {day(0, {0, -1})})); }),
            ErrorCode::ZeroScale);
  EXPECT_EQ(code_of([] { denormalize(CurveSet(TimeGrid::uniform(2), {day(0, {1, 2})})); }),
            ErrorCode::NotNormalized);
}

TEST(Denormalize, Fixtures) {
  const CurveSet half(TimeGrid::uniform(2), {day(0, {0.5, 1.0})}, 800.0);
  EXPECT_DOUBLE_EQ(denormalize(half)[0].values[0], 400.0);
  const CurveSet n(TimeGrid::uniform(4), {day(0, {0.125, 0.25, 0.375, 0.5}), day(1, {0.25, 0.5, 0.75, 1.0})}, 8.0);
  const CurveSet d = denormalize(n);
  EXPECT_FALSE(d.normalized());
  EXPECT_EQ(d[0].values, (std::vector<double>{1, 2, 3, 4}));
  EXPECT_EQ(d[1].values, (std::vector<double>{2, 4, 6, 8}));
}

TEST(NormalizeProperty, RoundTripMaxAndOrder) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 900.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 7;
    std::vector<DailyCurve> curves;
    const int n = 1 + trial % 9;
    for (int i = 0; i < n; ++i) {
      std::vector<double> v(m);
      for (double &x : v) {
        x = u(rng);
      }
      v[0] = std::abs(v[0]) + 1.0;
      curves.push_back(day(n - i, v));
    }
    const CurveSet s(TimeGrid::uniform(m), curves);
    const CurveSet norm = normalize_by_max(s);
    double mx = -1e300;
    for (const auto &c : norm.curves()) {
      for (double v : c.values) {
        mx = std::max(mx, v);
      }
    }
    EXPECT_EQ(mx, 1.0);
    const CurveSet back = denormalize(norm);
    ASSERT_EQ(back.dates(), s.dates());
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        EXPECT_LE(std::abs(back[i].values[j] - s[i].values[j]), 1e-12 * std::abs(s[i].values[j]) + 1e-300);
      }
    }
  }
}

TEST(Normalize, ComposesScaleWhenRenormalized) {
  const CurveSet s(TimeGrid::uniform(2), {day(0, {0.25, 0.5})}, 8.0);
  const CurveSet n = normalize_by_max(s);
  EXPECT_EQ(n.scale(), 4.0);
  EXPECT_EQ(denormalize(n)[0].values, (std::vector<double>{2, 4}));
}

TEST(CurveSet, RestrictedTo) {
  const CurveSet s(TimeGrid::uniform(2), {day(0, {1, 1}), day(1, {2, 2}), day(2, {3, 3})}, 2.0);
  const CurveSet r = s.restricted_to({make_date(2020, 1, 2), make_date(2020, 1, 5)});
  EXPECT_EQ(r.size(), 2u);
  EXPECT_EQ(r.scale(), 2.0);
}
