#pragma once

// Distribution functions used by the statistical tests. All functions are
// pure and reentrant.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace edprof::dist {

double normal_cdf(double x);
double normal_sf(double x);
// P(|T| >= |t|) for Student t with df degrees of freedom.
double t_two_sided_p(double t, double df);
double t_quantile(double p, double df);
double chi2_sf(double x, double df);
double f_sf(double x, double df1, double df2);

// Studentized range distribution for k means and df error degrees of freedom
// (df = infinity allowed). Evaluated by fixed-order Gauss-Legendre panels over
// the normal range integral and the scaled-chi density.
double ptukey(double q, std::size_t k, double df);
// Upper-tail critical value: q such that ptukey(q, k, df) = 1 - alpha.
double qtukey_upper(double alpha, std::size_t k, double df);

// n-point Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n);

}  // namespace edprof::dist
