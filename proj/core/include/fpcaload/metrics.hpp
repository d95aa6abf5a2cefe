#pragma once

#include <span>

namespace fpcaload {

// All indices take the measured series first and the predicted series
// second. Both must be non-empty, of equal length and finite.

/// Mean absolute percentage error, in percent. Throws DivisionByZeroActual
/// listing every index whose actual value is exactly zero.
double mape(std::span<const double> actual, std::span<const double> predicted);

/// Energy percentage error over a window, including the leading 1/m factor:
/// (1/m) |sum x - sum y| / sum x * 100.
double energy_percent_error(std::span<const double> actual,
                            std::span<const double> predicted);

/// |sum x - sum y| / |sum x| * 100, without the 1/m factor.
double energy_percent_error_total(std::span<const double> actual,
                                  std::span<const double> predicted);

double mae(std::span<const double> actual, std::span<const double> predicted);

enum class NmseForm {
  ActualVariance, ///< mean squared error / population variance of the actuals
  MeanProduct,    ///< mean squared error / (mean(actual) * mean(predicted))
};

double nmse(std::span<const double> actual, std::span<const double> predicted,
            NmseForm form = NmseForm::ActualVariance);

/// Root relative squared error in percent: 100 sqrt(sum (x-y)^2 / sum x^2).
double rep(std::span<const double> actual, std::span<const double> predicted);

/// Pearson product-moment correlation.
double ppmcc(std::span<const double> actual, std::span<const double> predicted);

} // namespace fpcaload
