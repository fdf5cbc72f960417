#pragma once

namespace sahs::stats {

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation. Accurate to ~1e-14 for moderate a, b.
double incomplete_beta(double a, double b, double x);

// Upper tail of the F distribution, P[F(d1, d2) > f].
double f_upper_tail(double f, double d1, double d2);

// Two-sided p-value of Student's t with df degrees of freedom.
double t_two_sided(double t, double df);

}  // namespace sahs::stats
