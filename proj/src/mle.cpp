#include "bellstat/mle.hpp"

#include <algorithm>
#include <cmath>

#include "bellstat/errors.hpp"
#include "bellstat/gls.hpp"

namespace bellstat {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// The reconstruction p = T*theta + t0 is affine; T and t0 for the full
// 8-parameter model. Cell order inside a block: ++, +-, -+, --.
struct AffineModel {
    MatrixXd T;   // 16 x dim
    VectorXd t0;  // 16
};

const AffineModel& full_model() {
    static const AffineModel m = [] {
        AffineModel am{MatrixXd::Zero(16, 8), VectorXd::Zero(16)};
        for (int i = 0; i < 4; ++i) {
            const int a = i / 2, b = i % 2;  // 0-based setting indices
            for (int j = 0; j < 4; ++j) {
                const double x = j < 2 ? 1.0 : -1.0;
                const double y = j % 2 == 0 ? 1.0 : -1.0;
                const int r = 4 * i + j;
                am.t0[r] = 0.25 - x / 4.0 - y / 4.0;
                am.T(r, a) = x / 2.0;
                am.T(r, 2 + b) = y / 2.0;
                am.T(r, 4 + i) = x * y / 4.0;
            }
        }
        return am;
    }();
    return m;
}

// Restriction of the full model to the CHSH facet with sign vector s:
// sum_i s_i rho_i = 2 solved for rho22, leaving 7 free parameters.
AffineModel facet_model(const std::array<int, 4>& s) {
    const AffineModel& full = full_model();
    MatrixXd M = MatrixXd::Zero(8, 7);
    M.topLeftCorner(7, 7).setIdentity();
    for (int i = 0; i < 3; ++i) M(7, 4 + i) = -static_cast<double>(s[3] * s[i]);
    VectorXd m0 = VectorXd::Zero(8);
    m0[7] = 2.0 * s[3];
    return {full.T * M, full.t0 + full.T * m0};
}

VectorXd embed_facet(const std::array<int, 4>& s, const VectorXd& th7) {
    VectorXd th8(8);
    th8.head(7) = th7;
    th8[7] = 2.0 * s[3];
    for (int i = 0; i < 3; ++i) th8[7] -= s[3] * s[i] * th7[4 + i];
    return th8;
}

VectorXd to_vector(const NsParams& th) {
    VectorXd v(8);
    v << th.pa[0], th.pa[1], th.qb[0], th.qb[1], th.rho[0], th.rho[1],
        th.rho[2], th.rho[3];
    return v;
}

NsParams to_params(const VectorXd& v) {
    NsParams th;
    th.pa = {v[0], v[1]};
    th.qb = {v[2], v[3]};
    th.rho = {v[4], v[5], v[6], v[7]};
    return th;
}

Vector16 counts_vector(const BellDataset& ds) {
    const std::array<std::int64_t, 16> x = flat_counts(ds);
    Vector16 v;
    for (int i = 0; i < 16; ++i) v[i] = static_cast<double>(x[i]);
    return v;
}

// Multinomial log-likelihood at cell probabilities p; 0*log(0) is 0.
double loglik_at(const Vector16& X, const VectorXd& p) {
    double val = 0.0;
    for (int i = 0; i < 16; ++i)
        if (X[i] > 0.0) val += X[i] * std::log(p[i]);
    return val;
}

struct FitOutcome {
    VectorXd theta;
    int iterations = 0;
    bool converged = false;
    std::string note;
};

// Damped Newton ascent on  l(theta) + mu * sum(log p)  with mu shrinking
// geometrically over 6 stages. The barrier simply adds mu to every count.
// Terminations: gradient norm <= 1e-9, step norm <= 1e-12, or no improving
// backtracked step (stall, the huge-n situation); only exhausting the
// overall iteration cap reports non-convergence.
FitOutcome barrier_newton(const Vector16& X, const AffineModel& m,
                          const VectorXd& th0, int cap) {
    const double mu0 = 1e-4 / X.sum();
    VectorXd th = th0;
    int total_iters = 0;
    bool moved = false;
    bool stalled = false;
    bool grad_ok = false;

    for (int stage = 0; stage < 6; ++stage) {
        const double mu = mu0 * std::pow(0.1, stage);
        while (total_iters < cap) {
            const VectorXd p = m.T * th + m.t0;
            const double val = loglik_at(X, p) + mu * p.array().log().sum();
            const VectorXd w = (X.array() + mu) / p.array();
            const VectorXd g = m.T.transpose() * w;
            ++total_iters;
            if (g.norm() <= 1e-9) {
                grad_ok = true;
                break;
            }
            const MatrixXd H =
                m.T.transpose() *
                (w.array() / p.array()).matrix().asDiagonal() * m.T;
            const VectorXd d = H.ldlt().solve(g);  // H is +T'DT = -Hessian
            if (!d.allFinite()) {
                stalled = true;
                break;
            }

            // Longest step keeping every cell strictly positive.
            const VectorXd dp = m.T * d;
            double tmax = 1.0;
            for (int k = 0; k < 16; ++k)
                if (dp[k] < 0.0) tmax = std::min(tmax, -p[k] / dp[k] * 0.99);

            double t = std::min(1.0, tmax);
            const double slope = g.dot(d);
            bool improved = false;
            VectorXd th_new;
            while (t > 1e-16) {
                th_new = th + t * d;
                const VectorXd p_new = m.T * th_new + m.t0;
                if ((p_new.array() > 0.0).all()) {
                    const double val_new = loglik_at(X, p_new) +
                                           mu * p_new.array().log().sum();
                    if (val_new > val + 1e-4 * t * slope) {
                        improved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if (!improved) {
                stalled = true;
                break;
            }
            const double step = (t * d).norm();
            if (step > 1e-12 * std::max(1.0, th.norm())) moved = true;
            th = th_new;
            if (step <= 1e-12) break;
        }
        if (total_iters >= cap) break;
    }

    FitOutcome out;
    out.theta = th;
    out.iterations = total_iters;
    out.converged = total_iters < cap;
    if (out.converged && stalled && !grad_ok)
        out.note = moved ? "stalled-at-numerical-precision"
                         : "terminated-at-start";
    return out;
}

MleFit finish_fit(const Vector16& X, const AffineModel& full,
                  const VectorXd& th8, const FitOutcome& oc, Model model) {
    MleFit fit;
    fit.params = to_params(th8);
    const VectorXd p = full.T * th8 + full.t0;
    for (int i = 0; i < 16; ++i) fit.probs[i] = p[i];
    fit.loglik = loglik_at(X, p);
    fit.model = model;
    fit.converged = oc.converged;
    fit.iterations = oc.iterations;
    fit.grad_norm = (full.T.transpose() *
                     (X.array() / p.array()).matrix())
                        .norm();
    fit.note = oc.note;
    return fit;
}

// One-sided CHSH sums of a reconstructed parameter vector.
std::array<double, 8> chsh_of_theta(const VectorXd& th8) {
    std::array<double, 8> out{};
    const auto& signs = odd_sign_vectors();
    for (int k = 0; k < 8; ++k)
        for (int i = 0; i < 4; ++i) out[k] += signs[k][i] * th8[4 + i];
    return out;
}

void require_strictly_feasible(const VectorXd& p) {
    for (int i = 0; i < 16; ++i)
        if (!(p[i] >= 1e-12))
            throw InfeasibleParamsError(
                "cell probability " + std::to_string(p[i]) +
                " at flat index " + std::to_string(i) +
                " is not strictly positive; start from a feasible point");
}

}  // namespace

std::array<double, 16> params_to_probs(const NsParams& th) {
    const AffineModel& m = full_model();
    const VectorXd p = m.T * to_vector(th) + m.t0;
    for (int i = 0; i < 16; ++i)
        if (p[i] < 0.0)
            throw InfeasibleParamsError(
                "reconstructed probability is negative at block " +
                std::to_string(i / 4 + 1) + ", cell " +
                std::to_string(i % 4 + 1) + ": " + std::to_string(p[i]));
    std::array<double, 16> out;
    for (int i = 0; i < 16; ++i) out[i] = p[i];
    return out;
}

NsParams probs_to_params(const std::array<double, 16>& p) {
    const Vector16 v = Eigen::Map<const Vector16>(p.data());
    for (int i = 0; i < 4; ++i) {
        const double sum = v.segment<4>(4 * i).sum();
        if (std::abs(sum - 1.0) > 1e-8)
            throw InfeasibleParamsError("block " + std::to_string(i + 1) +
                                        " sums to " + std::to_string(sum) +
                                        ", not 1");
    }
    const Eigen::Vector4d viol = constraint_matrix().transpose() * v;
    if (viol.cwiseAbs().maxCoeff() > 1e-8)
        throw InfeasibleParamsError(
            "probabilities violate no-signalling (max deviation " +
            std::to_string(viol.cwiseAbs().maxCoeff()) +
            "); project onto the no-signalling subspace first");

    NsParams th;
    // Under no-signalling the two blocks sharing a local setting agree on
    // the marginal; averaging symmetrizes the 1e-8 tolerance.
    th.pa[0] = (v[0] + v[1] + v[4] + v[5]) / 2.0;
    th.pa[1] = (v[8] + v[9] + v[12] + v[13]) / 2.0;
    th.qb[0] = (v[0] + v[2] + v[8] + v[10]) / 2.0;
    th.qb[1] = (v[4] + v[6] + v[12] + v[14]) / 2.0;
    for (int i = 0; i < 4; ++i)
        th.rho[i] = v[4 * i] + v[4 * i + 3] - v[4 * i + 1] - v[4 * i + 2];
    return th;
}

LogLik loglik(const NsParams& th, const BellDataset& ds) {
    const AffineModel& m = full_model();
    const Vector16 X = counts_vector(ds);
    const VectorXd p = m.T * to_vector(th) + m.t0;
    require_strictly_feasible(p);

    LogLik out;
    out.value = loglik_at(X, p);
    out.gradient = m.T.transpose() * (X.array() / p.array()).matrix();
    out.hessian = -(m.T.transpose() *
                    (X.array() / p.array().square()).matrix().asDiagonal() *
                    m.T);
    return out;
}

MleFit fit_nosignalling(const BellDataset& ds, const NsParams& init) {
    const AffineModel& m = full_model();
    const Vector16 X = counts_vector(ds);
    const VectorXd th0 = to_vector(init);
    require_strictly_feasible(m.T * th0 + m.t0);

    const FitOutcome oc = barrier_newton(X, m, th0, 500);
    return finish_fit(X, m, oc.theta, oc, Model::no_signalling);
}

MleFit fit_localrealism(const BellDataset& ds, const NsParams& init) {
    const MleFit ns = fit_nosignalling(ds, init);
    const Vector16 X = counts_vector(ds);
    const AffineModel& full = full_model();

    const std::array<double, 8> svals = chsh_of_theta(to_vector(ns.params));
    std::vector<int> violated;
    for (int k = 0; k < 8; ++k)
        if (svals[k] > 2.0 + 1e-8) violated.push_back(k);

    if (violated.empty()) {
        MleFit fit = ns;
        fit.model = Model::local_realism;
        fit.active_constraint.reset();
        return fit;
    }
    if (violated.size() > 1) {
        std::string idx;
        for (int k : violated) idx += (idx.empty() ? "" : ", ") + std::to_string(k);
        throw UnsupportedGeometryError(
            "multiple one-sided CHSH inequalities violated at the "
            "unconstrained optimum (facet indices " + idx + ")");
    }

    const int facet = violated[0];
    const std::array<int, 4>& s = odd_sign_vectors()[facet];
    const AffineModel m7 = facet_model(s);

    // Start from the initializer restricted to the facet, shrunk toward the
    // center of the polytope until strictly feasible.
    const VectorXd th_init = to_vector(init);
    VectorXd th7(7);
    double lam = 1.0;
    while (true) {
        for (int i = 0; i < 4; ++i) th7[i] = 0.5 + (th_init[i] - 0.5) * lam;
        for (int i = 0; i < 3; ++i) th7[4 + i] = th_init[4 + i] * lam;
        if (((m7.T * th7 + m7.t0).array() > 1e-12).all()) break;
        lam *= 0.95;
        if (lam < 1e-6)
            throw InfeasibleParamsError(
                "no strictly feasible start on the local-realism facet");
    }

    const FitOutcome oc = barrier_newton(X, m7, th7, 500);
    MleFit fit =
        finish_fit(X, full, embed_facet(s, oc.theta), oc, Model::local_realism);
    fit.active_constraint = facet;

    // The substituted facet holds by construction; the other seven must
    // hold at the optimum, which we verify rather than assume.
    const std::array<double, 8> post = chsh_of_theta(to_vector(fit.params));
    for (int k = 0; k < 8; ++k)
        if (post[k] > 2.0 + 1e-8)
            throw UnsupportedGeometryError(
                "local-realism fit leaves facet " + std::to_string(k) +
                " violated (S = " + std::to_string(post[k]) + ")");
    return fit;
}

WilksResult wilks_test(const BellDataset& ds) {
    const Projection proj = project_nosignalling(flatten(ds));
    const NsParams init = probs_to_params(proj.ptilde);

    WilksResult res;
    if (proj.clamped)
        res.warnings.push_back(
            "projection onto the no-signalling subspace clamped negative "
            "cells before the fits were initialized");
    if (proj.regularized)
        res.warnings.push_back(
            "projection used a pseudo-inverse for a near-singular "
            "constraint covariance");
    res.fit_ns = fit_nosignalling(ds, init);
    res.fit_lr = fit_localrealism(ds, init);

    const double raw = 2.0 * (res.fit_ns.loglik - res.fit_lr.loglik);
    res.statistic = raw > 0.0 ? raw : 0.0;
    if (raw < -1e-8)
        res.warnings.push_back(
            "likelihood ordering violated beyond tolerance (" +
            std::to_string(raw) + "); statistic clamped to 0");
    if (!res.fit_ns.converged || !res.fit_lr.converged)
        res.warnings.push_back("a fit hit the iteration cap; p-value computed "
                               "from the returned iterates");
    for (const MleFit* f : {&res.fit_ns, &res.fit_lr})
        if (!f->note.empty())
            res.warnings.push_back(
                (f->model == Model::no_signalling ? "no-signalling fit "
                                                  : "local-realism fit ") +
                f->note);
    res.p = wilks_mixture_sf(res.statistic);
    return res;
}

OneStepResult one_step_estimate(const BellDataset& ds, const NsParams& init) {
    const AffineModel& m = full_model();
    const Vector16 X = counts_vector(ds);
    const VectorXd th = to_vector(init);
    const VectorXd p = m.T * th + m.t0;
    require_strictly_feasible(p);

    const VectorXd w = X.array() / p.array();
    const VectorXd g = m.T.transpose() * w;
    const MatrixXd H =
        m.T.transpose() * (w.array() / p.array()).matrix().asDiagonal() * m.T;
    const Eigen::LDLT<MatrixXd> ldlt(H);
    const VectorXd d = ldlt.solve(g);
    if (ldlt.info() != Eigen::Success || !d.allFinite() ||
        (H * d - g).norm() > 1e-6 * std::max(1.0, g.norm()))
        return {init, 0.0, true};

    const VectorXd dp = m.T * d;
    double tmax = 1.0;
    for (int k = 0; k < 16; ++k)
        if (dp[k] < 0.0) tmax = std::min(tmax, -p[k] / dp[k] * 0.99);
    double t = std::min(1.0, tmax);

    // Halve until the likelihood does not decrease (a pure damping guard;
    // one Newton step near the optimum accepts t immediately).
    const double val = loglik_at(X, p);
    while (t > 1e-16) {
        const VectorXd p_new = m.T * (th + t * d) + m.t0;
        if ((p_new.array() > 0.0).all() && loglik_at(X, p_new) >= val) break;
        t *= 0.5;
    }
    const VectorXd th_new = th + t * d;
    return {to_params(th_new), (t * d).norm(), false};
}

}  // namespace bellstat
