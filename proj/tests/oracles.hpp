#pragma once

#include <functional>
#include <vector>

namespace oracle {

/// Adaptive Simpson quadrature.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                 int max_depth = 28);

/// Principal value of Int_a^b f(t)/(s - t) dt for interior s, by singularity
/// subtraction: the regularized part is integrated adaptively, the subtracted
/// pole contributes f(s) log|s - a| - f(s) log|b - s|.
double pv_integral(const std::function<double(double)>& f, double a, double b, double s,
                   double tol = 1e-10);

/// Principal value of Int_a^b num(t)/den(t) dt where den has simple interior
/// roots; each root is removed analytically before adaptive integration.
double pv_rational(const std::function<double(double)>& num,
                   const std::function<double(double)>& den,
                   const std::function<double(double)>& dden, const std::vector<double>& roots,
                   double a, double b, double tol = 1e-9);

} // namespace oracle
