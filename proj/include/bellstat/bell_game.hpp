#pragma once

#include <cstdint>

#include "bellstat/counts.hpp"
#include "bellstat/stat_dist.hpp"

namespace bellstat {

// Outcome of the martingale Bell-game test. Under local realism the
// per-trial win probability is at most 3/4 regardless of drifts or memory,
// so the number of wins is stochastically dominated by Bin(trials, 3/4);
// quantum strategies can reach 1/2 + sqrt(2)/4 (the Tsirelson rate).
struct GameResult {
    std::int64_t wins = 0;
    std::int64_t trials = 0;
    double win_rate = 0.0;
    TailProb p;
    double lr_bound = 0.75;
    double tsirelson_rate = 0.0;
};

struct WinCount {
    std::int64_t wins = 0;
    std::int64_t trials = 0;
};

// A trial is won when the outcomes are equal, unless both settings are "2",
// in which case opposite outcomes win: diagonal cells of blocks (1,1),
// (1,2), (2,1) plus anti-diagonal cells of block (2,2).
WinCount count_wins(const BellDataset& ds);

// p = P(Bin(trials, 3/4) >= wins), the exact binomial tail.
GameResult bell_game_test(const BellDataset& ds);

}  // namespace bellstat
