#pragma once

namespace agenda::analytics {

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// Two-sided p-value of a t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

// Significance stars at 0.05 / 0.01 / 0.001.
int significance_stars(double p);

}  // namespace agenda::analytics
