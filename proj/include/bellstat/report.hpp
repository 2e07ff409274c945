#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bellstat/bell_game.hpp"
#include "bellstat/counts.hpp"
#include "bellstat/gls.hpp"
#include "bellstat/mle.hpp"

namespace bellstat {

// Which analysis pipelines to run.
struct MethodSet {
    bool gls = true;
    bool mle = true;
    bool bellgame = true;
};

// Chebyshev companion bound for one reported z-value; printed alongside
// extreme tails, where the normal approximation outruns its accuracy.
struct ChebyshevEntry {
    std::string label;
    double z = 0.0;
    TailProb bound;
};

// Everything one analysis run produces. Optional members are absent when
// the corresponding method was not requested.
struct AnalysisReport {
    BellDataset dataset;          // canonical orientation actually analyzed
    CanonicalTransform transform; // input -> canonical recoding
    Correlations corr;
    std::optional<Estimate> s_naive, j_naive, s_opt, j_opt;
    std::optional<WilksResult> wilks;
    std::optional<GameResult> game;
    std::vector<ChebyshevEntry> chebyshev;
    std::vector<std::string> warnings;
};

// Canonicalizes the dataset and runs the selected pipelines.
AnalysisReport analyze(const BellDataset& ds, const MethodSet& methods);

// Deterministic renderings: 7 significant digits in text (extreme tails in
// scientific notation with their Chebyshev companion), full-precision
// doubles in JSON. Identical reports render byte-identically.
std::string render_text(const AnalysisReport& report);
std::string render_json(const AnalysisReport& report);

// One computed-vs-published comparison row. `criterion` groups the rows
// into the numbered reference blocks used by `reproduce` and the
// acceptance runner.
struct ReferenceCheck {
    int criterion = 0;
    std::string dataset;
    std::string quantity;
    std::string expected;  // published value and tolerance, as displayed
    std::string computed;  // computed value, as displayed
    double computed_value = 0.0;
    bool pass = false;
    std::string note;  // diagnosis for known discrepancies, flags
};

// Runs every method on every embedded dataset and compares against the
// published figures (reference blocks 1-9).
std::vector<ReferenceCheck> reference_checks();

// The comparison table emitted by `reproduce`, with footnotes.
std::string render_reference_table(const std::vector<ReferenceCheck>& checks);

// Helper shared by rendering and checks: printf-style %.*g formatting.
std::string format_sig(double value, int digits);

}  // namespace bellstat
