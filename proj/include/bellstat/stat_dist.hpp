#pragma once

#include <cstdint>

namespace bellstat {

// A tail probability carried in both linear and log form, so that extreme
// tails (far below DBL_MIN) keep full relative accuracy in log_p while p
// degrades gracefully to subnormal/zero.
struct TailProb {
    double p = 1.0;
    double log_p = 0.0;
};

// One-sided upper tail P(Z >= z) of the standard normal. Uses erfc directly
// and switches to an asymptotic log-domain expansion for large z, keeping
// ~1e-13 relative accuracy of log_p over z in [-38, 38].
TailProb normal_sf(double z);

// Upper tail of chi-square with one degree of freedom: 2 * normal_sf(sqrt(w)).
// Throws DomainError for w < 0.
TailProb chisq1_sf(double w);

// Survival function of the 50-50 mixture of chi-square(1) and a point mass
// at zero that governs the likelihood-ratio statistic on the boundary:
// 1 at w = 0, else 0.5 * chisq1_sf(w). Throws DomainError for w < 0.
TailProb wilks_mixture_sf(double w);

// Exact binomial upper tail P(X >= k) for X ~ Bin(n, p), evaluated by
// log-gamma anchored summation from the smallest term upward. Accepts
// 0 <= k <= n+1 (k = n+1 gives probability 0). Throws DomainError when p is
// outside (0,1) or k is out of range.
TailProb binom_sf(std::int64_t n, double p, std::int64_t k);

// Chebyshev bound min(1, 1/z^2), the distribution-free companion p-value
// reported next to extreme normal tails. Throws DomainError for z <= 0.
TailProb chebyshev_p(double z);

}  // namespace bellstat
