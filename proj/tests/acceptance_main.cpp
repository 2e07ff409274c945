// Acceptance runner for the ten numbered criteria. Criteria 1-9 compare
// computed figures against the published ones (the reference blocks from
// reference_checks()); criterion 10 runs randomized property suites against
// independent oracles: exact rational GLS, finite-difference gradients,
// forward binomial summation, and structural invariants. Each criterion
// prints one PASS/FAIL line followed by its sub-checks; the process exits 0
// only when every selected criterion passes.
//
// Usage: acceptance [--criterion N]...    (default: all ten)

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bellstat/bell_game.hpp"
#include "bellstat/counts.hpp"
#include "bellstat/gls.hpp"
#include "bellstat/io.hpp"
#include "bellstat/mle.hpp"
#include "bellstat/report.hpp"
#include "bellstat/stat_dist.hpp"
#include "test_support.hpp"

namespace {

using namespace bellstat;
using testsupport::fd_gradient;
using testsupport::forward_binom_sf;
using testsupport::make_table;
using testsupport::random_dataset;
using testsupport::random_interior_params;
using testsupport::rational_gls;
using testsupport::RationalGls;

struct SubCheck {
    bool pass = false;
    std::string text;
    std::string note;
};

const char* criterion_title(int crit) {
    switch (crit) {
        case 1: return "delft naive GLS figures";
        case 2: return "delft optimized GLS figures";
        case 3: return "delft likelihood-ratio tail";
        case 4: return "munich GLS and likelihood-ratio figures";
        case 5: return "nist GLS and likelihood-ratio figures";
        case 6: return "vienna GLS and likelihood-ratio figures";
        case 7: return "weihs two-decimal S figures and z > 25";
        case 8: return "zhang S, Bell game, and optimization gain";
        case 9: return "Chebyshev companion";
        case 10: return "property suites";
    }
    return "";
}

std::vector<SubCheck> criterion_from_reference(int crit) {
    static const std::vector<ReferenceCheck> rows = reference_checks();
    std::vector<SubCheck> out;
    for (const ReferenceCheck& r : rows) {
        if (r.criterion != crit) continue;
        SubCheck s;
        s.pass = r.pass;
        s.text = r.dataset + " " + r.quantity + ": published " + r.expected +
                 ", computed " + r.computed;
        s.note = r.note;
        out.push_back(std::move(s));
    }
    return out;
}

bool rel_ok(double computed, double expected, double rtol) {
    if (expected == 0.0) return computed == 0.0;
    return std::abs(computed - expected) <= rtol * std::abs(expected);
}

std::string describe(double v) { return format_sig(v, 17); }

// --- criterion 10 property suites -------------------------------------------

SubCheck prop_variance_dominance() {
    SubCheck s;
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const BellDataset ds = random_dataset(rng, 1, 50);
        for (Kind kind : {Kind::S, Kind::J}) {
            const Estimate n = naive_estimate(ds, kind);
            const Estimate o = optimized_estimate(ds, kind);
            if (n.regularized || o.regularized) continue;
            ++checked;
            if (!(o.se <= n.se + 1e-12)) {
                s.note = "trial " + std::to_string(trial) + ": optimized se " +
                         describe(o.se) + " > naive se " + describe(n.se);
                s.text = "optimized se never exceeds naive se";
                return s;
            }
        }
    }
    s.pass = true;
    s.text = "optimized se never exceeds naive se (" + std::to_string(checked) +
             " estimates on 1000 random datasets)";
    return s;
}

SubCheck prop_s_j_identity() {
    SubCheck s;
    int checked = 0;
    const auto check_one = [&](const BellDataset& ds,
                               const std::string& label) {
        const Estimate so = optimized_estimate(ds, Kind::S);
        const Estimate jo = optimized_estimate(ds, Kind::J);
        if (so.regularized || jo.regularized) return true;
        ++checked;
        if (std::abs(so.value - (2.0 + 4.0 * jo.value)) > 1e-10 ||
            std::abs(so.se - 4.0 * jo.se) > 1e-10) {
            s.note = label + ": S " + describe(so.value) + " vs 2+4J " +
                     describe(2.0 + 4.0 * jo.value) + ", se " +
                     describe(so.se) + " vs 4 se_J " + describe(4.0 * jo.se);
            return false;
        }
        return true;
    };
    for (const std::string& name : embedded_names())
        if (!check_one(load_embedded(name), name)) {
            s.text = "optimized estimates satisfy S = 2 + 4J";
            return s;
        }
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial)
        if (!check_one(random_dataset(rng, 1, 40),
                       "random trial " + std::to_string(trial))) {
            s.text = "optimized estimates satisfy S = 2 + 4J";
            return s;
        }
    s.pass = true;
    s.text = "optimized estimates satisfy S = 2 + 4J and se_S = 4 se_J (" +
             std::to_string(checked) + " datasets)";
    return s;
}

SubCheck prop_rational_oracle() {
    SubCheck s;
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const BellDataset ds = random_dataset(rng, 1, 5);
        for (Kind kind : {Kind::S, Kind::J}) {
            const RationalGls exact = rational_gls(ds, kind);
            const Estimate n = naive_estimate(ds, kind);
            const Estimate o = optimized_estimate(ds, kind);
            const bool ok =
                !o.regularized &&
                rel_ok(n.value, exact.naive_value, 1e-12) &&
                rel_ok(n.se, std::sqrt(exact.naive_variance), 1e-12) &&
                rel_ok(o.value, exact.value, 1e-12) &&
                rel_ok(o.se, std::sqrt(exact.variance), 1e-12);
            if (!ok) {
                s.text = "GLS matches exact rational recomputation";
                s.note = "trial " + std::to_string(trial) + ": computed " +
                         describe(o.value) + ", exact " + describe(exact.value);
                return s;
            }
        }
    }
    s.pass = true;
    s.text =
        "GLS matches exact rational recomputation (20 random datasets, both "
        "functionals)";
    return s;
}

SubCheck prop_fd_gradient() {
    SubCheck s;
    std::mt19937_64 rng(99);
    const std::array<const char*, 3> names = {"delft", "munich", "zhang"};
    for (int trial = 0; trial < 100; ++trial) {
        const BellDataset ds = load_embedded(names[trial % 3]);
        const NsParams th = random_interior_params(rng);
        const LogLik ll = loglik(th, ds);
        const std::array<double, 8> fd = fd_gradient(ds, th);
        double err2 = 0.0;
        for (int i = 0; i < 8; ++i) {
            const double d = ll.gradient(i) - fd[i];
            err2 += d * d;
        }
        const double scale = std::max(1.0, ll.gradient.norm());
        if (std::sqrt(err2) > 1e-5 * scale) {
            s.text = "analytic log-likelihood gradient matches central "
                     "differences";
            s.note = "trial " + std::to_string(trial) + " (" +
                     names[trial % 3] + "): normwise error " +
                     describe(std::sqrt(err2) / scale);
            return s;
        }
    }
    s.pass = true;
    s.text =
        "analytic log-likelihood gradient matches central differences (100 "
        "interior points)";
    return s;
}

SubCheck prop_uniform_wilks() {
    SubCheck s;
    BellDataset ds;
    ds.name = "uniform";
    for (int i = 0; i < 4; ++i) ds.tables[i] = make_table(25, 25, 25, 25);
    const WilksResult w = wilks_test(ds);
    if (w.statistic == 0.0 && w.p.p == 1.0 && w.p.log_p == 0.0 &&
        !w.fit_lr.active_constraint.has_value()) {
        s.pass = true;
        s.text = "uniform counts give W = 0 with mixture tail exactly 1";
    } else {
        s.text = "uniform counts give W = 0 with mixture tail exactly 1";
        s.note = "W = " + describe(w.statistic) + ", p = " + describe(w.p.p);
    }
    return s;
}

SubCheck prop_binom_forward() {
    SubCheck s;
    int checked = 0;
    for (std::int64_t n : {std::int64_t{7}, std::int64_t{25}, std::int64_t{61},
                           std::int64_t{137}, std::int64_t{245}}) {
        for (double p : {0.3, 0.5, 0.75, 0.9}) {
            for (double frac : {0.1, 0.5, 0.75, 0.9, 1.0}) {
                const std::int64_t k =
                    std::min<std::int64_t>(n, std::llround(frac * n));
                ++checked;
                const double exact = forward_binom_sf(n, p, k);
                const TailProb got = binom_sf(n, p, k);
                if (!rel_ok(got.p, exact, 1e-10)) {
                    s.text = "binomial tail matches forward summation";
                    s.note = "n=" + std::to_string(n) + " p=" + describe(p) +
                             " k=" + std::to_string(k) + ": computed " +
                             describe(got.p) + ", forward " + describe(exact);
                    return s;
                }
            }
        }
    }
    s.pass = true;
    s.text = "binomial tail matches forward summation (" +
             std::to_string(checked) + " cases)";
    return s;
}

SubCheck prop_canonicalize() {
    SubCheck s;
    s.text =
        "canonicalization: embedded data are fixed points; all 64 recodings "
        "of delft and zhang canonicalize back";
    for (const std::string& name : embedded_names()) {
        const BellDataset ds = load_embedded(name);
        const CanonicalizeResult c = canonicalize(ds);
        if (!c.transform.is_identity() || !(c.dataset == ds)) {
            s.note = name + " is not a fixed point";
            return s;
        }
    }
    for (const char* name : {"delft", "zhang"}) {
        const BellDataset ds = load_embedded(name);
        const double smax = chsh_all_signs(ds)[0];
        for (int mask = 0; mask < 64; ++mask) {
            CanonicalTransform t;
            t.alice_flip = {(mask & 1) ? -1 : 1, (mask & 2) ? -1 : 1};
            t.bob_flip = {(mask & 4) ? -1 : 1, (mask & 8) ? -1 : 1};
            t.alice_setting_swap = (mask & 16) != 0;
            t.bob_setting_swap = (mask & 32) != 0;
            const BellDataset scrambled = apply_transform(ds, t);
            const CanonicalizeResult c = canonicalize(scrambled);
            const bool ok =
                std::abs(chsh_all_signs(c.dataset)[0] - smax) <= 1e-12 &&
                apply_transform(scrambled, c.transform) == c.dataset &&
                canonicalize(c.dataset).transform.is_identity();
            if (!ok) {
                s.note = std::string(name) + ", recoding mask " +
                         std::to_string(mask) +
                         ": canonical form not recovered";
                return s;
            }
        }
    }
    s.pass = true;
    return s;
}

SubCheck prop_round_trip() {
    SubCheck s;
    s.text = "JSON and CSV round-trips preserve every embedded dataset";
    for (const std::string& name : embedded_names()) {
        const BellDataset ds = load_embedded(name);
        const BellDataset via_json =
            parse_dataset(serialize_dataset(ds, Format::json), Format::json);
        if (!(via_json == ds)) {
            s.note = name + ": JSON round-trip altered the dataset";
            return s;
        }
        const BellDataset via_csv =
            parse_dataset(serialize_dataset(ds, Format::csv), Format::csv);
        if (!(via_csv.tables == ds.tables)) {
            s.note = name + ": CSV round-trip altered the counts";
            return s;
        }
    }
    s.pass = true;
    return s;
}

std::vector<SubCheck> criterion10() {
    return {prop_variance_dominance(), prop_s_j_identity(),
            prop_rational_oracle(),    prop_fd_gradient(),
            prop_uniform_wilks(),      prop_binom_forward(),
            prop_canonicalize(),       prop_round_trip()};
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            char* end = nullptr;
            const long n = std::strtol(argv[++i], &end, 10);
            if (end == nullptr || *end != '\0' || n < 1 || n > 10) {
                std::fprintf(stderr,
                             "error: --criterion expects an integer 1..10, "
                             "got '%s'\n",
                             argv[i]);
                return 2;
            }
            selected.push_back(static_cast<int>(n));
        } else {
            std::fprintf(stderr,
                         "error: unknown argument '%s'\n"
                         "usage: acceptance [--criterion N]...\n",
                         arg.c_str());
            return 2;
        }
    }
    if (selected.empty())
        for (int crit = 1; crit <= 10; ++crit) selected.push_back(crit);

    bool all_ok = true;
    try {
        for (int crit : selected) {
            const std::vector<SubCheck> subs =
                crit == 10 ? criterion10() : criterion_from_reference(crit);
            const bool ok =
                !subs.empty() &&
                std::all_of(subs.begin(), subs.end(),
                            [](const SubCheck& s) { return s.pass; });
            all_ok = all_ok && ok;
            std::printf("criterion %d: %s  (%s)\n", crit, ok ? "PASS" : "FAIL",
                        criterion_title(crit));
            for (const SubCheck& s : subs) {
                std::printf("    [%s] %s\n", s.pass ? "pass" : "FAIL",
                            s.text.c_str());
                if (!s.note.empty())
                    std::printf("           note: %s\n", s.note.c_str());
            }
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    if (selected.size() > 1)
        std::printf("%s\n", all_ok ? "all criteria passed"
                                   : "one or more criteria failed");
    return all_ok ? 0 : 1;
}
