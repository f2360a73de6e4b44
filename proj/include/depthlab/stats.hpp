#pragma once

#include <vector>

namespace depthlab {

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// Upper tail of the chi-square distribution with dof degrees of freedom.
double chi_square_pvalue(double stat, int dof);

// Two-sample Kolmogorov-Smirnov distance.
double ks_distance(std::vector<double> a, std::vector<double> b);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace depthlab
