#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace bellstat {

// One 2x2 table of outcome-pair counts for a fixed setting pair.
// Row = Alice's outcome, column = Bob's outcome, index 0 = "+", 1 = "-".
struct CountTable {
    std::array<std::array<std::int64_t, 2>, 2> counts{{{0, 0}, {0, 0}}};

    std::int64_t at(int alice, int bob) const { return counts[alice][bob]; }
    std::int64_t& at(int alice, int bob) { return counts[alice][bob]; }
    std::int64_t total() const {
        return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
    }

    bool operator==(const CountTable& other) const = default;
};

// Four CountTables indexed by setting pair (a,b) in {1,2}^2, block order
// (1,1),(1,2),(2,1),(2,2), plus outcome labels and a flag recording whether
// the dataset is known to be in canonical orientation (the large negative
// correlation sits at setting pair (2,2)).
struct BellDataset {
    std::string name;
    std::array<std::string, 2> alice_labels{{"+", "-"}};
    std::array<std::string, 2> bob_labels{{"+", "-"}};
    std::array<CountTable, 4> tables{};
    bool canonical = false;

    // a, b are 1-based setting indices.
    CountTable& table(int a, int b) { return tables[2 * (a - 1) + (b - 1)]; }
    const CountTable& table(int a, int b) const {
        return tables[2 * (a - 1) + (b - 1)];
    }

    // Content equality: name, labels and counts. The `canonical` flag is
    // derived metadata and deliberately excluded, so a parsed copy of an
    // embedded dataset compares equal to the original.
    bool operator==(const BellDataset& other) const {
        return name == other.name && alice_labels == other.alice_labels &&
               bob_labels == other.bob_labels && tables == other.tables;
    }
};

// The 16 relative frequencies and the four per-block trial totals.
// Index convention: entry 4*(i-1)+j-1 for block i in 1..4 over setting pairs
// (1,1),(1,2),(2,1),(2,2) and outcome pair j in 1..4 over (++, +-, -+, --).
struct FlatView {
    std::array<double, 16> phat{};
    std::array<std::int64_t, 4> n{};
};

// Per-dataset correlations and pooled outcome marginals.
struct Correlations {
    std::array<double, 4> rho{};              // block order (1,1),(1,2),(2,1),(2,2)
    std::array<double, 2> alice_marginals{};  // P(+ | setting a), pooled over b
    std::array<double, 2> bob_marginals{};    // P(+ | setting b), pooled over a
};

// An invertible recoding of a dataset: optional swap of the two settings per
// side, then an outcome-label flip per (side, new setting index). Flip value
// -1 means the labels were exchanged, +1 means untouched.
struct CanonicalTransform {
    std::array<int, 2> alice_flip{{1, 1}};
    std::array<int, 2> bob_flip{{1, 1}};
    bool alice_setting_swap = false;
    bool bob_setting_swap = false;
    bool tie = false;  // true when several sign vectors attained the max S

    bool is_identity() const {
        return alice_flip[0] == 1 && alice_flip[1] == 1 && bob_flip[0] == 1 &&
               bob_flip[1] == 1 && !alice_setting_swap && !bob_setting_swap;
    }
};

struct CanonicalizeResult {
    BellDataset dataset;
    CanonicalTransform transform;
};

// The 8 sign vectors s in {+1,-1}^4 with an odd number of -1 entries, in
// lexicographic order with +1 sorting first. The first entry is the
// canonical (1,1,1,-1) giving S = rho11 + rho12 + rho21 - rho22.
const std::array<std::array<int, 4>, 8>& odd_sign_vectors();

// Counts of the named appendix dataset. Throws NotFoundError for unknown
// names; valid names are listed in embedded_names().
BellDataset load_embedded(const std::string& name);
const std::array<std::string, 6>& embedded_names();

// Per-block correlations rho_ab and pooled outcome marginals. Throws
// DegenerateDataError when a block has no trials.
Correlations correlations(const BellDataset& ds);

// All 8 one-sided CHSH sums  S_s = sum_i s_i * rho_i, in enumeration order.
std::array<double, 8> chsh_all_signs(const BellDataset& ds);

// Relative frequencies; throws DegenerateDataError if any block is empty.
FlatView flatten(const BellDataset& ds);

// The 16 raw counts in the FlatView index convention.
std::array<std::int64_t, 16> flat_counts(const BellDataset& ds);

// Applies setting swaps first, then outcome flips (flip indices refer to the
// post-swap setting labels). Preserves name and labels; clears `canonical`.
BellDataset apply_transform(const BellDataset& ds, const CanonicalTransform& t);

// The transform undoing `t`: apply_transform(apply_transform(ds, t),
// invert(t)) == ds.
CanonicalTransform invert(const CanonicalTransform& t);

// Recode outcomes so the maximal one-sided CHSH sum appears in canonical
// position (1,1,1,-1). Ties are broken by enumeration order and recorded in
// transform.tie. The returned transform maps the input to the output.
CanonicalizeResult canonicalize(const BellDataset& ds);

}  // namespace bellstat
