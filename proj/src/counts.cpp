#include "bellstat/counts.hpp"

#include <algorithm>
#include <cmath>

#include "bellstat/errors.hpp"

namespace bellstat {

const std::array<std::array<int, 4>, 8>& odd_sign_vectors() {
    // Lexicographic over (s1,s2,s3,s4) with +1 before -1 is binary counting
    // with bit=1 meaning -1; the odd-popcount patterns are 1,2,4,7,8,11,13,14.
    static const std::array<std::array<int, 4>, 8> vecs = [] {
        std::array<std::array<int, 4>, 8> v{};
        int out = 0;
        for (int m = 0; m < 16; ++m) {
            int minus = 0;
            std::array<int, 4> s{};
            for (int i = 0; i < 4; ++i) {
                const bool neg = (m >> (3 - i)) & 1;
                s[i] = neg ? -1 : 1;
                minus += neg;
            }
            if (minus % 2 == 1) v[out++] = s;
        }
        return v;
    }();
    return vecs;
}

Correlations correlations(const BellDataset& ds) {
    Correlations out;
    for (int i = 0; i < 4; ++i) {
        const CountTable& t = ds.tables[i];
        const std::int64_t n = t.total();
        if (n <= 0)
            throw DegenerateDataError("empty table for setting pair (" +
                                      std::to_string(i / 2 + 1) + "," +
                                      std::to_string(i % 2 + 1) + ")");
        out.rho[i] = static_cast<double>(t.at(0, 0) + t.at(1, 1) - t.at(0, 1) -
                                         t.at(1, 0)) /
                     static_cast<double>(n);
    }
    // Marginals pool the two blocks sharing the local setting, weighted by
    // their trial totals: e.g. P(alice=+ | a) uses tables (a,1) and (a,2).
    for (int a = 1; a <= 2; ++a) {
        std::int64_t plus = 0, tot = 0;
        for (int b = 1; b <= 2; ++b) {
            const CountTable& t = ds.table(a, b);
            plus += t.at(0, 0) + t.at(0, 1);
            tot += t.total();
        }
        out.alice_marginals[a - 1] =
            static_cast<double>(plus) / static_cast<double>(tot);
    }
    for (int b = 1; b <= 2; ++b) {
        std::int64_t plus = 0, tot = 0;
        for (int a = 1; a <= 2; ++a) {
            const CountTable& t = ds.table(a, b);
            plus += t.at(0, 0) + t.at(1, 0);
            tot += t.total();
        }
        out.bob_marginals[b - 1] =
            static_cast<double>(plus) / static_cast<double>(tot);
    }
    return out;
}

std::array<double, 8> chsh_all_signs(const BellDataset& ds) {
    const Correlations c = correlations(ds);
    std::array<double, 8> out{};
    const auto& signs = odd_sign_vectors();
    for (int k = 0; k < 8; ++k) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i) s += signs[k][i] * c.rho[i];
        out[k] = s;
    }
    return out;
}

FlatView flatten(const BellDataset& ds) {
    FlatView fv;
    for (int i = 0; i < 4; ++i) {
        const CountTable& t = ds.tables[i];
        const std::int64_t n = t.total();
        if (n <= 0)
            throw DegenerateDataError("empty table for setting pair (" +
                                      std::to_string(i / 2 + 1) + "," +
                                      std::to_string(i % 2 + 1) + ")");
        fv.n[i] = n;
        for (int j = 0; j < 4; ++j)
            fv.phat[4 * i + j] = static_cast<double>(t.at(j / 2, j % 2)) /
                                 static_cast<double>(n);
    }
    return fv;
}

std::array<std::int64_t, 16> flat_counts(const BellDataset& ds) {
    std::array<std::int64_t, 16> x{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            x[4 * i + j] = ds.tables[i].at(j / 2, j % 2);
    return x;
}

namespace {

void flip_rows(CountTable& t) {
    std::swap(t.counts[0], t.counts[1]);
}

void flip_cols(CountTable& t) {
    std::swap(t.counts[0][0], t.counts[0][1]);
    std::swap(t.counts[1][0], t.counts[1][1]);
}

}  // namespace

BellDataset apply_transform(const BellDataset& ds, const CanonicalTransform& t) {
    BellDataset out = ds;
    out.canonical = false;
    if (t.alice_setting_swap) {
        std::swap(out.tables[0], out.tables[2]);  // (1,1) <-> (2,1)
        std::swap(out.tables[1], out.tables[3]);  // (1,2) <-> (2,2)
    }
    if (t.bob_setting_swap) {
        std::swap(out.tables[0], out.tables[1]);  // (1,1) <-> (1,2)
        std::swap(out.tables[2], out.tables[3]);  // (2,1) <-> (2,2)
    }
    for (int a = 1; a <= 2; ++a)
        if (t.alice_flip[a - 1] == -1)
            for (int b = 1; b <= 2; ++b) flip_rows(out.table(a, b));
    for (int b = 1; b <= 2; ++b)
        if (t.bob_flip[b - 1] == -1)
            for (int a = 1; a <= 2; ++a) flip_cols(out.table(a, b));
    return out;
}

CanonicalTransform invert(const CanonicalTransform& t) {
    // apply() swaps settings, then flips outcomes. The inverse applies the
    // same swaps, but its flip indices must be permuted back through them.
    CanonicalTransform inv = t;
    inv.tie = false;
    if (t.alice_setting_swap)
        inv.alice_flip = {t.alice_flip[1], t.alice_flip[0]};
    if (t.bob_setting_swap) inv.bob_flip = {t.bob_flip[1], t.bob_flip[0]};
    return inv;
}

CanonicalizeResult canonicalize(const BellDataset& ds) {
    const std::array<double, 8> svals = chsh_all_signs(ds);
    int best = 0;
    bool tie = false;
    for (int k = 1; k < 8; ++k) {
        if (svals[k] > svals[best]) {
            best = k;
            tie = false;
        } else if (svals[k] == svals[best]) {
            tie = true;
        }
    }
    const std::array<int, 4>& s = odd_sign_vectors()[best];

    // We need per-setting outcome flips f (Alice) and g (Bob) such that the
    // flipped correlations f_a*g_b*rho_ab place the maximal sum in canonical
    // position: f_a*g_b must equal c_ab*s_ab with c = (1,1,1,-1). The four
    // targets multiply to +1 exactly because s has odd minus-count, so a
    // solution exists; the two solutions differ by a global sign.
    const std::array<int, 4> target{s[0], s[1], s[2], -s[3]};
    struct Flips {
        std::array<int, 2> f, g;
        int total() const {
            return (f[0] < 0) + (f[1] < 0) + (g[0] < 0) + (g[1] < 0);
        }
        int bob() const { return (g[0] < 0) + (g[1] < 0); }
    };
    const Flips a{{1, target[0] * target[2]}, {target[0], target[1]}};
    const Flips b{{-a.f[0], -a.f[1]}, {-a.g[0], -a.g[1]}};

    // Prefer fewer flips overall, then fewer flips on Bob's side, then
    // leaving Alice's first setting untouched.
    const Flips* pick = &a;
    if (b.total() < a.total() ||
        (b.total() == a.total() &&
         (b.bob() < a.bob() || (b.bob() == a.bob() && b.f[0] > a.f[0]))))
        pick = &b;

    CanonicalTransform t;
    t.alice_flip = pick->f;
    t.bob_flip = pick->g;
    t.tie = tie;

    CanonicalizeResult res{apply_transform(ds, t), t};
    res.dataset.canonical = true;
    return res;
}

}  // namespace bellstat
