#pragma once

#include <vector>

namespace xrmarl::harness {

double mean(const std::vector<double>& values);
// Sample standard deviation (n - 1 denominator); 0 for n < 2.
double sample_std(const std::vector<double>& values);

// Two-sided 97.5% Student-t quantile for the given degrees of freedom
// (table for df 1..30, standard large-sample values beyond).
double t_quantile_975(int dof);

// Half-width of the 95% confidence interval: t * s / sqrt(n); 0 for n < 2.
double ci95_halfwidth(const std::vector<double>& values);

}  // namespace xrmarl::harness
