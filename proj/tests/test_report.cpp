#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include <doctest.h>

#include <json.hpp>

#include "bellstat/counts.hpp"
#include "bellstat/report.hpp"

using namespace bellstat;

namespace {

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("analyze(delft) populates every requested section") {
    const AnalysisReport r = analyze(load_embedded("delft"), MethodSet{});
    CHECK(r.dataset.name == "delft");
    CHECK(r.transform.is_identity());
    REQUIRE(r.s_naive.has_value());
    REQUIRE(r.j_naive.has_value());
    REQUIRE(r.s_opt.has_value());
    REQUIRE(r.j_opt.has_value());
    REQUIRE(r.wilks.has_value());
    REQUIRE(r.game.has_value());
    CHECK(r.warnings.empty());
    CHECK(r.s_naive->value == doctest::Approx(2.4225).epsilon(1e-4));
    CHECK(r.game->wins == 196);
    CHECK_FALSE(r.chebyshev.empty());
}

TEST_CASE("analyze flags extreme tails") {
    const AnalysisReport r = analyze(load_embedded("nist"), MethodSet{});
    bool found = false;
    for (const std::string& w : r.warnings)
        if (contains(w, "extreme tail")) found = true;
    CHECK(found);
}

TEST_CASE("method subsets leave the other sections empty") {
    MethodSet gls_only;
    gls_only.mle = false;
    gls_only.bellgame = false;
    const AnalysisReport r = analyze(load_embedded("delft"), gls_only);
    CHECK(r.s_naive.has_value());
    CHECK_FALSE(r.wilks.has_value());
    CHECK_FALSE(r.game.has_value());

    const auto j = nlohmann::json::parse(render_json(r));
    CHECK(j.contains("gls"));
    CHECK_FALSE(j.contains("wilks"));
    CHECK_FALSE(j.contains("bellgame"));

    const std::string text = render_text(r);
    CHECK_FALSE(contains(text, "likelihood"));
    CHECK_FALSE(contains(text, "Bell game"));
}

TEST_CASE("text rendering carries the headline numbers") {
    const AnalysisReport r = analyze(load_embedded("delft"), MethodSet{});
    const std::string text = render_text(r);
    CHECK(contains(text, "dataset: delft"));
    CHECK(contains(text, "2.4225"));
    CHECK(contains(text, "2.462658"));
    CHECK(contains(text, "196 of 245"));
    CHECK(contains(text, "Chebyshev"));
    CHECK(contains(text, "warnings: none"));
}

TEST_CASE("rendering is deterministic and JSON round-trips exactly") {
    const BellDataset ds = load_embedded("munich");
    const AnalysisReport a = analyze(ds, MethodSet{});
    const AnalysisReport b = analyze(ds, MethodSet{});
    CHECK(render_text(a) == render_text(b));
    CHECK(render_json(a) == render_json(b));

    const auto j = nlohmann::json::parse(render_json(a));
    // Doubles survive serialization bit-exactly.
    CHECK(j["gls"]["s_naive"]["value"].get<double>() == a.s_naive->value);
    CHECK(j["gls"]["s_optimized"]["se"].get<double>() == a.s_opt->se);
    CHECK(j["gls"]["j_naive"]["p"].get<double>() == a.j_naive->p.p);
    CHECK(j["wilks"]["statistic"].get<double>() == a.wilks->statistic);
    CHECK(j["wilks"]["p"].get<double>() == a.wilks->p.p);
    CHECK(j["bellgame"]["p"].get<double>() == a.game->p.p);
    CHECK(j["bellgame"]["wins"].get<std::int64_t>() == a.game->wins);
    CHECK(j["dataset"]["name"].get<std::string>() == "munich");
    CHECK(j["transform"]["identity"].get<bool>());
    CHECK(j["wilks"]["local_realism"]["active_facet"].get<int>() == 0);
}

TEST_CASE("analyze canonicalizes scrambled input and reports the recoding") {
    const BellDataset ds = load_embedded("delft");
    CanonicalTransform scramble;
    scramble.alice_flip = {-1, 1};
    scramble.bob_flip = {1, -1};
    scramble.bob_setting_swap = true;
    const BellDataset scrambled = apply_transform(ds, scramble);

    MethodSet gls_only;
    gls_only.mle = false;
    gls_only.bellgame = false;
    const AnalysisReport r = analyze(scrambled, gls_only);
    CHECK_FALSE(r.transform.is_identity());
    CHECK(r.dataset.canonical);
    // The canonical frame restores the original S estimate exactly.
    const AnalysisReport base = analyze(ds, gls_only);
    CHECK(std::abs(r.s_naive->value - base.s_naive->value) <= 1e-12);

    const auto j = nlohmann::json::parse(render_json(r));
    CHECK_FALSE(j["transform"]["identity"].get<bool>());
}

TEST_CASE("reference checks: forty rows, known failures only") {
    const std::vector<ReferenceCheck> checks = reference_checks();
    CHECK(checks.size() == 40);

    std::set<std::pair<std::string, std::string>> failures;
    for (const ReferenceCheck& c : checks)
        if (!c.pass) failures.insert({c.dataset, c.quantity});

    const std::set<std::pair<std::string, std::string>> expected = {
        {"nist", "z (S naive)"},
        {"nist", "z (S optimized)"},
        {"vienna", "z (S naive)"},
        {"vienna", "z (S optimized)"},
        {"zhang", "Bell-game p"},
    };
    CHECK(failures == expected);

    for (const ReferenceCheck& c : checks) {
        CHECK(!c.quantity.empty());
        CHECK(!c.expected.empty());
        CHECK(!c.computed.empty());
        if (!c.pass) CHECK(!c.note.empty());  // every failure is diagnosed
        CHECK(c.criterion >= 1);
        CHECK(c.criterion <= 9);
    }
}

TEST_CASE("reference table renders passes, failures and notes") {
    const std::string table = render_reference_table(reference_checks());
    CHECK(contains(table, "published"));
    CHECK(contains(table, "computed"));
    CHECK(contains(table, "FAIL ["));
    CHECK(contains(table, "notes:"));
    CHECK(contains(table, "35/40 checks passed"));
    CHECK(contains(table, "blocks 5, 6, 8"));
}

TEST_CASE("format_sig matches printf %.*g") {
    CHECK(format_sig(2.4625, 5) == "2.4625");
    CHECK(format_sig(0.0033061224489795916, 2) == "0.0033");
    CHECK(format_sig(8.0429428627914710e-13, 1) == "8e-13");
    CHECK(format_sig(1.971474e-14, 7) == "1.971474e-14");
    CHECK(format_sig(0.0, 3) == "0");
}

}  // TEST_SUITE
