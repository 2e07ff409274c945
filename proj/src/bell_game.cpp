#include "bellstat/bell_game.hpp"

#include <cmath>

namespace bellstat {

WinCount count_wins(const BellDataset& ds) {
    WinCount wc;
    for (int i = 0; i < 4; ++i) {
        const CountTable& t = ds.tables[i];
        wc.trials += t.total();
        wc.wins += i == 3 ? t.at(0, 1) + t.at(1, 0)   // block (2,2): opposite
                          : t.at(0, 0) + t.at(1, 1);  // equal outcomes
    }
    return wc;
}

GameResult bell_game_test(const BellDataset& ds) {
    const WinCount wc = count_wins(ds);
    GameResult res;
    res.wins = wc.wins;
    res.trials = wc.trials;
    res.win_rate =
        static_cast<double>(wc.wins) / static_cast<double>(wc.trials);
    res.p = binom_sf(wc.trials, 0.75, wc.wins);
    res.tsirelson_rate = 0.5 + std::sqrt(2.0) / 4.0;
    return res;
}

}  // namespace bellstat
