#include "fpcaload/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fpcaload/error.hpp"

namespace fpcaload {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || x.size() != y.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "series must be non-empty and of equal length (" + std::to_string(x.size()) +
                    " vs " + std::to_string(y.size()) + ")");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw Error(ErrorCode::InvalidArgument, "non-finite value at index " + std::to_string(i));
    }
  }
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) {
    s += a;
  }
  return s / static_cast<double>(v.size());
}

double sum_of(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) {
    s += a;
  }
  return s;
}

} // namespace

double mape(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted);
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] == 0.0) {
      zeros.push_back(i);
    }
  }
  if (!zeros.empty()) {
    throw Error(ErrorCode::DivisionByZeroActual,
                std::to_string(zeros.size()) + " actual value(s) equal zero", zeros);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    acc += std::abs((actual[i] - predicted[i]) / actual[i]);
  }
  return acc / static_cast<double>(actual.size()) * 100.0;
}

double energy_percent_error(std::span<const double> actual, std::span<const double> predicted) {
  return energy_percent_error_total(actual, predicted) / static_cast<double>(actual.size());
}

double energy_percent_error_total(std::span<const double> actual,
                                  std::span<const double> predicted) {
  check_pair(actual, predicted);
  const double sx = sum_of(actual);
  if (sx == 0.0) {
    throw Error(ErrorCode::ZeroTotalEnergy, "actual energy sums to zero");
  }
  return std::abs(sx - sum_of(predicted)) / std::abs(sx) * 100.0;
}

double mae(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted);
  double acc = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    acc += std::abs(actual[i] - predicted[i]);
  }
  return acc / static_cast<double>(actual.size());
}

double nmse(std::span<const double> actual, std::span<const double> predicted, NmseForm form) {
  check_pair(actual, predicted);
  const double m = static_cast<double>(actual.size());
  double sq = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double d = actual[i] - predicted[i];
    sq += d * d;
  }
  const double mse = sq / m;
  if (form == NmseForm::MeanProduct) {
    const double denom = mean_of(actual) * mean_of(predicted);
    if (denom == 0.0) {
      throw Error(ErrorCode::ZeroVarianceActual, "mean product of the series is zero");
    }
    return mse / denom;
  }
  const double xbar = mean_of(actual);
  double var = 0.0;
  for (double a : actual) {
    var += (a - xbar) * (a - xbar);
  }
  var /= m;
  if (var == 0.0) {
    throw Error(ErrorCode::ZeroVarianceActual, "actual series is constant");
  }
  return mse / var;
}

double rep(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double d = actual[i] - predicted[i];
    num += d * d;
    den += actual[i] * actual[i];
  }
  if (den == 0.0) {
    throw Error(ErrorCode::ZeroActualNorm, "actual series is identically zero");
  }
  return 100.0 * std::sqrt(num / den);
}

double ppmcc(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted);
  const double xbar = mean_of(actual);
  const double ybar = mean_of(predicted);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double dx = actual[i] - xbar;
    const double dy = predicted[i] - ybar;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::ZeroVariance, "correlation of a constant series");
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

} // namespace fpcaload
