#pragma once

#include <random>
#include <utility>
#include <vector>

#include "phigeo/word.hpp"
#include "test_support.hpp"

namespace testutil {

// (symbol, weight) pairs make the rewrites below straightforward; the weight
// entry is meaningful for p only
using Cells = std::vector<std::pair<phigeo::Symbol, double>>;

inline Cells to_cells(const phigeo::SectorWord& w) {
  Cells cells;
  size_t wi = 0;
  for (phigeo::Symbol s : w.symbols())
    cells.emplace_back(s, s == phigeo::Symbol::P ? w.p_weights()[wi++] : 0.0);
  return cells;
}

inline phigeo::SectorWord from_cells(const Cells& cells, int order) {
  std::vector<phigeo::Symbol> syms;
  std::vector<double> weights;
  for (const auto& [s, v] : cells) {
    syms.push_back(s);
    if (s == phigeo::Symbol::P) weights.push_back(v);
  }
  return phigeo::SectorWord(syms, order, weights);
}

// random word; h-only words allowed, p-weights positive
inline phigeo::SectorWord random_word(std::mt19937_64& rng) {
  int order = 1 + int(rand_in(rng, 0, 4.999));
  int len = 1 + int(rand_in(rng, 0, 9.999));
  std::string pattern;
  std::vector<double> weights;
  for (int i = 0; i < len; ++i) {
    if (rand_in(rng, 0, 1) < 0.5) {
      pattern += 'h';
    } else {
      pattern += 'p';
      weights.push_back(rand_in(rng, 0.05, 2.5));
    }
  }
  if (pattern.empty()) pattern = "h";
  return phigeo::SectorWord(pattern, order, weights);
}

// one random class-preserving rewrite: rotate, split one p into two, or merge
// a cyclically adjacent p-pair
inline phigeo::SectorWord random_op(std::mt19937_64& rng,
                                    const phigeo::SectorWord& w) {
  using phigeo::Symbol;
  Cells cells = to_cells(w);
  const int len = int(cells.size());
  int choice = int(rand_in(rng, 0, 2.999));

  if (choice == 0 && len > 1) {  // cyclic rotation
    int k = 1 + int(rand_in(rng, 0, len - 1.001));
    Cells out;
    for (int i = 0; i < len; ++i) out.push_back(cells[(i + k) % len]);
    return from_cells(out, w.order());
  }

  if (choice == 1) {  // split a p
    std::vector<int> p_at;
    for (int i = 0; i < len; ++i)
      if (cells[i].first == Symbol::P) p_at.push_back(i);
    if (p_at.empty()) return w;
    int pick = p_at[int(rand_in(rng, 0, p_at.size() - 1e-9))];
    double f = rand_in(rng, 0.2, 0.8);
    Cells out;
    for (int i = 0; i < len; ++i) {
      if (i == pick) {
        out.emplace_back(Symbol::P, cells[i].second * f);
        out.emplace_back(Symbol::P, cells[i].second * (1 - f));
      } else {
        out.push_back(cells[i]);
      }
    }
    return from_cells(out, w.order());
  }

  // merge the first cyclically adjacent p-pair, if any
  for (int i = 0; len > 1 && i < len; ++i) {
    int j = (i + 1) % len;
    if (cells[i].first == Symbol::P && cells[j].first == Symbol::P) {
      Cells out;
      for (int t = 0; t < len; ++t) {
        if (t == j) continue;
        auto cell = cells[t];
        if (t == i) cell.second += cells[j].second;
        out.push_back(cell);
      }
      return from_cells(out, w.order());
    }
  }
  return w;
}

}  // namespace testutil
