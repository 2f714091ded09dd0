#pragma once

// Closed-form quantities for Brownian motion with generator (s/2) d^2/dx^2,
// used as references by the acceptance suite.

namespace hkmc::reference {

double normal_cdf(double z);

/// Gaussian kernel of the free motion.
double gaussian_kernel(double t, double x, double y, double scale = 1.0);
/// P_x[X_t in [a, b]] for the free motion.
double gaussian_interval(double t, double x, double a, double b, double scale = 1.0);

/// Dirichlet kernel on (a, b) by the method of images.
double dirichlet_kernel(double t, double x, double y, double a, double b, double scale = 1.0);
/// Average of the Dirichlet kernel over the cell [c, d].
double dirichlet_cell_average(double t, double x, double c, double d, double a, double b, double scale = 1.0);

/// P_0[tau_(-1,1) <= t] from the eigenfunction series (scale 1).
double exit_prob_series(double t);
/// E_0[tau_(-1,1) ^ cap], the series for P(tau > s) integrated over [0, cap].
double capped_mean_series(double cap);

}  // namespace hkmc::reference
