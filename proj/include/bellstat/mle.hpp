#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bellstat/counts.hpp"
#include "bellstat/stat_dist.hpp"

namespace bellstat {

// The 8 free parameters of the no-signalling model: outcome marginals
// P(+ | setting) per side and the four correlations. Cell probabilities are
// reconstructed as
//   p(x,y|a,b) = 1/4 + (pa_a - 1/2) x/2 + (qb_b - 1/2) y/2 + rho_ab xy/4
// with outcome signs x, y in {+1,-1}.
struct NsParams {
    std::array<double, 2> pa{{0.5, 0.5}};
    std::array<double, 2> qb{{0.5, 0.5}};
    std::array<double, 4> rho{};  // block order (1,1),(1,2),(2,1),(2,2)
};

enum class Model { no_signalling, local_realism };

// One maximum-likelihood fit. `active_constraint` is the enumeration index
// of the one-sided CHSH facet forced to equality (local-realism fits only;
// empty when the unconstrained optimum is already locally realistic).
// `note` records the numerical-termination edge cases at huge n:
// "terminated-at-start" when no step beyond numerical precision was taken,
// "stalled-at-numerical-precision" when line searches stopped improving
// before the gradient criterion was met.
struct MleFit {
    NsParams params;
    std::array<double, 16> probs{};
    double loglik = 0.0;
    Model model = Model::no_signalling;
    bool converged = false;
    int iterations = 0;
    std::optional<int> active_constraint;
    double grad_norm = 0.0;
    std::string note;
};

// Likelihood-ratio test of local realism against no-signalling.
struct WilksResult {
    double statistic = 0.0;  // 2*(loglik_ns - loglik_lr), clamped at 0
    TailProb p;              // 50-50 chi-square(1)/point-mass mixture tail
    MleFit fit_ns;
    MleFit fit_lr;
    std::vector<std::string> warnings;
};

// Value, gradient and Hessian of the multinomial log-likelihood at th.
struct LogLik {
    double value = 0.0;
    Eigen::Matrix<double, 8, 1> gradient;
    Eigen::Matrix<double, 8, 8> hessian;
};

// Result of a single damped Newton step.
struct OneStepResult {
    NsParams params;
    double step_norm = 0.0;
    bool hessian_singular = false;
};

// Reconstructs the 16 cell probabilities. Throws InfeasibleParamsError
// naming the offending cell if any probability is negative.
std::array<double, 16> params_to_probs(const NsParams& th);

// Inverse of params_to_probs on the no-signalling subspace. Requires block
// sums 1 and B^T p = 0 to 1e-8; otherwise throws InfeasibleParamsError
// telling the caller to project first.
NsParams probs_to_params(const std::array<double, 16>& p);

// Log-likelihood of the dataset's counts at th, with exact analytic
// derivatives. Zero-count cells contribute 0 (not NaN) to the value.
// Throws InfeasibleParamsError when any cell probability is < 1e-12.
LogLik loglik(const NsParams& th, const BellDataset& ds);

// Maximizes the multinomial likelihood over all 8 parameters by damped
// Newton ascent inside a geometrically decreasing log-barrier. init must be
// strictly feasible. converged=false only when the iteration cap (500) is
// exhausted; stalls at numerical precision count as convergence, see
// MleFit::note.
MleFit fit_nosignalling(const BellDataset& ds, const NsParams& init);

// Maximizes the likelihood subject to all eight one-sided CHSH inequalities.
// If the unconstrained optimum already satisfies them it is returned as-is;
// otherwise the single violated facet is substituted into the parametriza-
// tion (canonical case rho22 = rho11+rho12+rho21-2) and the remaining 7
// parameters are refit. Throws UnsupportedGeometryError if several facets
// are violated (impossible for true multinomial data, guarded anyway).
MleFit fit_localrealism(const BellDataset& ds, const NsParams& init);

// Twice the log-likelihood gap between the two fits with the boundary-
// mixture p-value; initializes both fits from the no-signalling projection
// of the observed frequencies.
WilksResult wilks_test(const BellDataset& ds);

// Exactly one damped Newton step on the no-signalling log-likelihood,
// shortened as needed to keep all probabilities strictly positive. A
// singular Hessian returns init unchanged with the flag set.
OneStepResult one_step_estimate(const BellDataset& ds, const NsParams& init);

}  // namespace bellstat
