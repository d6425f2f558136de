#pragma once

// Reference reducer shared by the test binaries. Rewrites an arbitrary mode
// word applied to the vacuum using only the relations {xi_m, eta_n} =
// delta_{m+n,0}, {xi,xi} = {eta,eta} = 0 and the vacuum conditions (positive
// labels and eta_0 kill the vacuum). It never touches the canonical-slot sign
// bookkeeping under test, so any agreement is meaningful.

#include <deque>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "etaxi/fock.hpp"

namespace oracle {

using etaxi::BasisState;
using etaxi::HalfInt;
using etaxi::ModeKind;

struct Letter {
  ModeKind kind;
  HalfInt label;
  friend bool operator==(const Letter& a, const Letter& b) = default;
};

inline bool is_annihilator(const Letter& l) {
  // eta_0 annihilates; xi_0 creates.
  if (l.kind == ModeKind::xi) return l.label.twice() > 0;
  return l.label.twice() >= 0;
}

inline std::tuple<int, int, long> order_key(const Letter& l) {
  return {is_annihilator(l) ? 1 : 0, static_cast<int>(l.kind), l.label.twice()};
}

inline bool contracts(const Letter& a, const Letter& b) {
  return a.kind != b.kind && (a.label + b.label).twice() == 0;
}

inline std::map<BasisState, long> reduce(const std::vector<Letter>& word) {
  std::map<BasisState, long> result;
  std::deque<std::pair<long, std::vector<Letter>>> todo;
  todo.emplace_back(1, word);
  while (!todo.empty()) {
    auto [coef, w] = todo.front();
    todo.pop_front();
    bool rewrote = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] == w[i + 1]) {
        rewrote = true;  // square of a fermionic letter
        break;
      }
      if (order_key(w[i]) > order_key(w[i + 1])) {
        auto swapped = w;
        std::swap(swapped[i], swapped[i + 1]);
        todo.emplace_back(-coef, std::move(swapped));
        if (contracts(w[i], w[i + 1])) {
          auto contracted = w;
          contracted.erase(contracted.begin() + i, contracted.begin() + i + 2);
          todo.emplace_back(coef, std::move(contracted));
        }
        rewrote = true;
        break;
      }
    }
    if (rewrote) continue;
    // Sorted: creators then annihilators. The rightmost letter acts first.
    if (!w.empty() && is_annihilator(w.back())) continue;
    BasisState s;
    for (const auto& l : w) {
      if (l.kind == ModeKind::xi && l.label.twice() < 0) s.p1.push_back(-l.label);
      else if (l.kind == ModeKind::xi) s.b = 1;
      else s.p2.push_back(-l.label);
    }
    result[s] += coef;
    if (result[s] == 0) result.erase(s);
  }
  return result;
}

// The canonical word of a state, as letters ready for prefixing.
inline std::vector<Letter> state_letters(const BasisState& s) {
  std::vector<Letter> w;
  for (auto n : s.p1) w.push_back({ModeKind::xi, -n});
  if (s.b) w.push_back({ModeKind::xi, HalfInt(0)});
  for (auto m : s.p2) w.push_back({ModeKind::eta, -m});
  return w;
}

}  // namespace oracle
