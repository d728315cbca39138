#pragma once

namespace certmc::specfun {

// Natural log of the gamma function for x > 0 (Lanczos approximation).
double ln_gamma(double x);

// Volume of the unit Euclidean ball in dimension p >= 1, computed in log
// space as exp(p/2 * log(pi) - ln_gamma(p/2 + 1)).
double unit_ball_volume(int p);

// Regularized incomplete beta function I_x(a, b) for a, b > 0 and x in [0, 1].
// Continued-fraction evaluation (modified Lentz), switching branch at
// x = (a + 1) / (a + b + 2) so the fraction always converges fast.
double reg_inc_beta(double a, double b, double x);

// Inverse of reg_inc_beta in x: returns x in [0, 1] with I_x(a, b) = u to
// within 1e-10, via bracketed bisection refined by Newton steps.
double inv_reg_inc_beta(double a, double b, double u);

}  // namespace certmc::specfun
