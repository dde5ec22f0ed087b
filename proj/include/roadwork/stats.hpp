#pragma once

#include <vector>

namespace roadwork::stats {

double mean(const std::vector<double>& values);
// Sample standard deviation (n-1 denominator); requires n >= 2.
double sample_std(const std::vector<double>& values);

double normal_pdf(double x, double mu, double sigma);
// Inverse standard normal CDF (Acklam's rational approximation, |err| < 2e-9).
double normal_quantile(double p);

} // namespace roadwork::stats
