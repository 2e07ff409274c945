#include "bellstat/gls.hpp"

#include <cmath>

namespace bellstat {

namespace {

// Solver for the 4x4 constraint covariance Sigma_BB. Uses an eigendecom-
// position so that a near-singular matrix (condition number above 1e12, as
// happens with zero cells at tiny n) degrades to the pseudo-inverse on the
// well-conditioned subspace instead of amplifying noise.
struct SbbSolver {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig;
    bool regularized = false;

    explicit SbbSolver(const Eigen::Matrix4d& sbb) : eig(sbb) {
        const double lmax = eig.eigenvalues().maxCoeff();
        const double floor = lmax * 1e-12;
        regularized = eig.eigenvalues().minCoeff() <= floor;
    }

    Eigen::Vector4d solve(const Eigen::Vector4d& rhs) const {
        const double lmax = eig.eigenvalues().maxCoeff();
        const double floor = lmax * 1e-12;
        Eigen::Vector4d scaled = eig.eigenvectors().transpose() * rhs;
        for (int i = 0; i < 4; ++i)
            scaled[i] =
                eig.eigenvalues()[i] > floor ? scaled[i] / eig.eigenvalues()[i]
                                             : 0.0;
        return eig.eigenvectors() * scaled;
    }
};

Vector16 to_eigen(const std::array<double, 16>& v) {
    return Eigen::Map<const Vector16>(v.data());
}

Estimate make_estimate(Kind kind, Method method, double value, double var) {
    Estimate e;
    e.kind = kind;
    e.method = method;
    e.value = value;
    e.se = std::sqrt(std::max(var, 0.0));
    const double bound = kind == Kind::S ? 2.0 : 0.0;
    e.z = (value - bound) / e.se;
    e.p = normal_sf(e.z);
    return e;
}

}  // namespace

const Matrix16x4& constraint_matrix() {
    static const Matrix16x4 B = [] {
        Matrix16x4 b = Matrix16x4::Zero();
        // Alice's "+" marginal under setting a: rows ++ and +- of block (a,1)
        // minus the same rows of block (a,2).
        for (int a = 0; a < 2; ++a) {
            const int col = a;
            b(4 * (2 * a + 0) + 0, col) = 1.0;
            b(4 * (2 * a + 0) + 1, col) = 1.0;
            b(4 * (2 * a + 1) + 0, col) = -1.0;
            b(4 * (2 * a + 1) + 1, col) = -1.0;
        }
        // Bob's "+" marginal under setting b: rows ++ and -+ of block (1,b)
        // minus the same rows of block (2,b).
        for (int bb = 0; bb < 2; ++bb) {
            const int col = 2 + bb;
            b(4 * (0 + bb) + 0, col) = 1.0;
            b(4 * (0 + bb) + 2, col) = 1.0;
            b(4 * (2 + bb) + 0, col) = -1.0;
            b(4 * (2 + bb) + 2, col) = -1.0;
        }
        return b;
    }();
    return B;
}

LinearFunctional functional(Kind kind) {
    LinearFunctional f;
    f.kind = kind;
    if (kind == Kind::S) {
        // S = rho11 + rho12 + rho21 - rho22; each correlation is
        // (1,-1,-1,1) applied to its block.
        static constexpr double sign[4] = {1.0, 1.0, 1.0, -1.0};
        static constexpr double cell[4] = {1.0, -1.0, -1.0, 1.0};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) f.a[4 * i + j] = sign[i] * cell[j];
    } else {
        // J = p(++|11) - p(+-|12) - p(-+|21) - p(++|22).
        f.a[0] = 1.0;
        f.a[4 + 1] = -1.0;
        f.a[8 + 2] = -1.0;
        f.a[12 + 0] = -1.0;
    }
    return f;
}

BlockCovariance covariance_matrix(const FlatView& fv) {
    BlockCovariance cov;
    for (int i = 0; i < 4; ++i) {
        const double n = static_cast<double>(fv.n[i]);
        const Eigen::Vector4d p =
            Eigen::Map<const Eigen::Vector4d>(fv.phat.data() + 4 * i);
        cov.sigma.block<4, 4>(4 * i, 4 * i) =
            (p.asDiagonal().toDenseMatrix() - p * p.transpose()) / n;
    }
    return cov;
}

Estimate naive_estimate(const BellDataset& ds, Kind kind) {
    const FlatView fv = flatten(ds);
    const Vector16 phat = to_eigen(fv.phat);
    const Vector16 a = functional(kind).a;
    const Matrix16 sigma = covariance_matrix(fv).sigma;
    return make_estimate(kind, Method::naive, a.dot(phat),
                         a.dot(sigma * a));
}

Estimate optimized_estimate(const BellDataset& ds, Kind kind) {
    const FlatView fv = flatten(ds);
    const Vector16 phat = to_eigen(fv.phat);
    const Vector16 a = functional(kind).a;
    const Matrix16 sigma = covariance_matrix(fv).sigma;
    const Matrix16x4& B = constraint_matrix();

    const Eigen::Vector4d sigma_ba = B.transpose() * (sigma * a);
    const SbbSolver solver(B.transpose() * sigma * B);
    const Eigen::Vector4d c = solver.solve(sigma_ba);

    Estimate e = make_estimate(kind, Method::optimized,
                               a.dot(phat) - c.dot(B.transpose() * phat),
                               a.dot(sigma * a) - sigma_ba.dot(c));
    Eigen::Map<Eigen::Vector4d>(e.c.data()) = c;
    e.regularized = solver.regularized;
    return e;
}

Projection project_nosignalling(const FlatView& fv) {
    const Vector16 phat = to_eigen(fv.phat);
    const Matrix16 sigma = covariance_matrix(fv).sigma;
    const Matrix16x4& B = constraint_matrix();

    const SbbSolver solver(B.transpose() * sigma * B);
    const Vector16 ptilde =
        phat - sigma * B * solver.solve(B.transpose() * phat);

    Projection out;
    out.regularized = solver.regularized;
    Eigen::Map<Vector16> result(out.ptilde.data());
    result = ptilde;
    if ((ptilde.array() < 0.0).any()) {
        out.clamped = true;
        result = ptilde.cwiseMax(1e-12);
        for (int i = 0; i < 4; ++i)
            result.segment<4>(4 * i) /= result.segment<4>(4 * i).sum();
    }
    return out;
}

}  // namespace bellstat
