#pragma once

#include <Eigen/Dense>
#include <array>

#include "bellstat/counts.hpp"
#include "bellstat/stat_dist.hpp"

namespace bellstat {

using Vector16 = Eigen::Matrix<double, 16, 1>;
using Matrix16 = Eigen::Matrix<double, 16, 16>;
using Matrix16x4 = Eigen::Matrix<double, 16, 4>;

// Which linear functional of the 16 cell probabilities is being estimated.
enum class Kind { S, J };
enum class Method { naive, optimized };

// Plug-in covariance of the 16 relative frequencies: block-diagonal with one
// multinomial block (diag(p) - p p^T)/n_i per setting pair.
struct BlockCovariance {
    Matrix16 sigma = Matrix16::Zero();
};

// Coefficient vector of S or J in the FlatView index convention.
struct LinearFunctional {
    Vector16 a = Vector16::Zero();
    Kind kind = Kind::S;
};

// A point estimate with its standard error and one-sided tail. `c` holds
// the noise-reduction coefficients (zero for the naive method);
// `regularized` marks estimates computed through the pseudo-inverse fallback
// for a near-singular constraint covariance.
struct Estimate {
    double value = 0.0;
    double se = 0.0;
    double z = 0.0;
    TailProb p;
    std::array<double, 4> c{};
    Kind kind = Kind::S;
    Method method = Method::naive;
    bool regularized = false;
};

// Result of projecting relative frequencies onto the no-signalling subspace.
struct Projection {
    std::array<double, 16> ptilde{};
    bool clamped = false;      // negatives were clamped and blocks renormalized
    bool regularized = false;  // pseudo-inverse fallback was used
};

// The 16x4 matrix whose columns are the four no-signalling contrasts
// (Alice's marginal per setting across Bob's settings, and vice versa);
// B^T p = 0 characterizes the no-signalling subspace.
const Matrix16x4& constraint_matrix();

// The S or J coefficient vector. S carries s_i * (1,-1,-1,1) on block i with
// s = (1,1,1,-1); J picks out ++ / +- / -+ / ++ cells of the four blocks.
LinearFunctional functional(Kind kind);

// Plug-in multinomial covariance built from the observed frequencies.
BlockCovariance covariance_matrix(const FlatView& fv);

// value = a^T phat, se from the plug-in covariance, one-sided z and p
// (distance above 2 for S, above 0 for J).
Estimate naive_estimate(const BellDataset& ds, Kind kind);

// Subtracts the minimum-variance linear combination of the observed
// no-signalling deviations:  value = a^T phat - c^T B^T phat with
// c = Sigma_BB^{-1} Sigma_Ba, se^2 = Sigma_aa - Sigma_aB Sigma_BB^{-1} Sigma_Ba.
Estimate optimized_estimate(const BellDataset& ds, Kind kind);

// phat - Sigma B (B^T Sigma B)^{-1} B^T phat: the same correction applied to
// the whole vector, used to initialize the maximum-likelihood fits. Block
// sums are preserved exactly; entries pushed below zero are clamped to 1e-12
// and the block renormalized (flagged).
Projection project_nosignalling(const FlatView& fv);

}  // namespace bellstat
