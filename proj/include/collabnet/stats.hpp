#pragma once

namespace collabnet::stats {

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// Upper tail P(F > f) of the F(d1, d2) distribution.
double f_sf(double f, double d1, double d2);

/// Two-sided tail P(|T| > |t|) of Student's t with `df` degrees of freedom.
double t_sf_two_sided(double t, double df);

double normal_cdf(double x);

/// Inverse of normal_cdf for p in (0, 1).
double normal_quantile(double p);

} // namespace collabnet::stats
