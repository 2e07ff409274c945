#include "bellstat/stat_dist.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bellstat/errors.hpp"

namespace bellstat {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))

// log P(Z >= z) for large positive z via the standard asymptotic expansion
//   P(Z >= z) = phi(z)/z * (1 - 1/z^2 + 3/z^4 - 15/z^6 + ...).
// With terms through 135135/z^14 the truncation error is below 5e-17
// relative for z >= 26.
double log_tail_asymptotic(double z) {
    const double u = 1.0 / (z * z);
    const double series =
        1.0 +
        u * (-1.0 +
             u * (3.0 +
                  u * (-15.0 +
                       u * (105.0 +
                            u * (-945.0 + u * (10395.0 - u * 135135.0))))));
    return -0.5 * z * z - std::log(z) - kLogSqrt2Pi + std::log(series);
}

}  // namespace

TailProb normal_sf(double z) {
    if (std::isnan(z)) throw DomainError("normal_sf: z is NaN");
    if (z < 0.0) {
        // p = 1 - q with q the (small) opposite tail; log1p keeps log_p
        // nonzero all the way down to q ~ 1e-316.
        const TailProb q = normal_sf(-z);
        return {1.0 - q.p, std::log1p(-q.p)};
    }
    TailProb out;
    if (z <= 26.0) {
        out.p = 0.5 * std::erfc(z / std::numbers::sqrt2);
        out.log_p = std::log(out.p);
    } else {
        out.log_p = log_tail_asymptotic(z);
        // erfc stays accurate while its result is a normal double; beyond
        // that reconstruct p from the log form (subnormal, best effort).
        out.p = z <= 36.5 ? 0.5 * std::erfc(z / std::numbers::sqrt2)
                          : std::exp(out.log_p);
    }
    return out;
}

TailProb chisq1_sf(double w) {
    if (!(w >= 0.0))
        throw DomainError("chisq1_sf: statistic must be >= 0, got " +
                          std::to_string(w));
    const TailProb half = normal_sf(std::sqrt(w));
    return {2.0 * half.p, std::log(2.0) + half.log_p};
}

TailProb wilks_mixture_sf(double w) {
    if (!(w >= 0.0))
        throw DomainError("wilks_mixture_sf: statistic must be >= 0, got " +
                          std::to_string(w));
    if (w == 0.0) return {1.0, 0.0};
    return normal_sf(std::sqrt(w));
}

namespace {

// Terms relative to the largest one decay below any double-precision
// visibility here; with at most ~1e7 omitted terms the neglected mass stays
// under 1e-14 relative.
constexpr double kLogCutoff = -50.0;

// log of the binomial pmf at j, via log-gamma.
double log_pmf(std::int64_t n, double logp, double logq, std::int64_t j) {
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(j) + 1.0) -
           std::lgamma(static_cast<double>(n - j) + 1.0) +
           static_cast<double>(j) * logp + static_cast<double>(n - j) * logq;
}

// Sum of pmf terms over j in [lo, hi], where the largest term sits at one
// end (`anchor_at_lo` selects which). Terms are accumulated from the
// smallest upward with Neumaier compensation; away from the anchor the log
// term follows the pmf ratio recurrence, re-anchored on log-gamma every 4096
// steps so accumulated rounding cannot reach 1e-12.
struct RelSum {
    double log_anchor;  // log of the largest term
    double rel_sum;     // sum of all terms relative to it, >= 1
};

RelSum tail_sum(std::int64_t n, double p, std::int64_t lo, std::int64_t hi,
                bool anchor_at_lo) {
    const double logp = std::log(p);
    const double logq = std::log1p(-p);
    const std::int64_t anchor = anchor_at_lo ? lo : hi;
    const int away = anchor_at_lo ? +1 : -1;  // direction anchor -> far end
    const double log_anchor = log_pmf(n, logp, logq, anchor);

    // log(t_{j+1} / t_j): one step up in j.
    const auto step_up = [&](std::int64_t j) {
        return std::log(static_cast<double>(n - j)) -
               std::log(static_cast<double>(j + 1)) + logp - logq;
    };
    // Move log_rel for a step from j to j+dir.
    const auto advance = [&](double log_rel, std::int64_t j, int dir) {
        return dir > 0 ? log_rel + step_up(j) : log_rel - step_up(j - 1);
    };

    // Pass 1: walk away from the anchor until terms stop mattering.
    std::int64_t far = anchor;
    {
        double log_rel = 0.0;
        const std::int64_t limit = anchor_at_lo ? hi : lo;
        while (far != limit) {
            log_rel = advance(log_rel, far, away);
            far += away;
            if (log_rel < kLogCutoff) break;
        }
    }

    // Pass 2: sum from the far (smallest) end back toward the anchor.
    double sum = 0.0, comp = 0.0;
    const auto add = [&](double term) {
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term
                                                : (term - t) + sum;
        sum = t;
    };
    double log_rel = log_pmf(n, logp, logq, far) - log_anchor;
    std::int64_t since_sync = 0;
    for (std::int64_t j = far; j != anchor; j -= away) {
        add(std::exp(log_rel));
        log_rel = advance(log_rel, j, -away);
        if (++since_sync == 4096) {
            log_rel = log_pmf(n, logp, logq, j - away) - log_anchor;
            since_sync = 0;
        }
    }
    add(1.0);  // the anchor term itself
    return {log_anchor, sum + comp};
}

}  // namespace

TailProb binom_sf(std::int64_t n, double p, std::int64_t k) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("binom_sf: success probability must lie in (0,1)");
    if (n < 0 || k < 0 || k > n + 1)
        throw DomainError("binom_sf: need 0 <= k <= n+1, got n=" +
                          std::to_string(n) + " k=" + std::to_string(k));
    if (k == 0) return {1.0, 0.0};
    if (k == n + 1) return {0.0, -std::numeric_limits<double>::infinity()};

    const auto mode = static_cast<std::int64_t>(
        std::floor((static_cast<double>(n) + 1.0) * p));
    if (k > mode) {
        // Upper tail excludes the mode: sum it directly, largest term at k.
        const RelSum s = tail_sum(n, p, k, n, /*anchor_at_lo=*/true);
        const double log_val = s.log_anchor + std::log(s.rel_sum);
        return {std::exp(log_val), log_val};
    }
    // The tail contains the mode and is the big piece; sum the complement
    // P(X <= k-1) instead, whose largest term sits at k-1.
    const RelSum s = tail_sum(n, p, 0, k - 1, /*anchor_at_lo=*/false);
    const double complement = std::exp(s.log_anchor) * s.rel_sum;
    return {1.0 - complement, std::log1p(-complement)};
}

TailProb chebyshev_p(double z) {
    if (!(z > 0.0))
        throw DomainError("chebyshev_p: z must be > 0, got " +
                          std::to_string(z));
    if (z <= 1.0) return {1.0, 0.0};
    return {1.0 / (z * z), -2.0 * std::log(z)};
}

}  // namespace bellstat
