#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "etaxi/halfint.hpp"
#include "etaxi/scalars.hpp"

namespace etaxi {

enum class ModeKind : int { xi = 0, eta = 1 };

inline const char* mode_name(ModeKind k) { return k == ModeKind::xi ? "xi" : "eta"; }

// Untwisted sector: integer labels, two zero modes, doubly degenerate vacuum.
// Twisted sector: half-odd labels, no zero modes, vacuum mu.
enum class Sector { NS, R };

inline int sector_delta(Sector s) { return s == Sector::NS ? 0 : 1; }
inline bool sector_has_zero_modes(Sector s) { return s == Sector::NS; }
inline const char* sector_str(Sector s) { return s == Sector::NS ? "NS" : "R"; }

inline bool label_in_sector(Sector s, HalfInt label) {
  return s == Sector::NS ? label.is_integer() : label.is_half_odd();
}

inline std::optional<Sector> parse_sector(const std::string& s) {
  if (s == "ns" || s == "NS") return Sector::NS;
  if (s == "r" || s == "R") return Sector::R;
  return std::nullopt;
}

/**
 * Canonical basis word xi(-n_1)..xi(-n_l) xi(0)^b eta(-m_1)..eta(-m_r) |vac>.
 *
 * p1, p2 hold the positive labels n_i, m_j, strictly decreasing. All sign
 * bookkeeping elsewhere derives from this single ordering convention.
 */
struct BasisState {
  std::vector<HalfInt> p1;
  std::vector<HalfInt> p2;
  std::uint8_t b = 0;

  HalfInt level() const {
    HalfInt s(0);
    for (auto x : p1) s += x;
    for (auto x : p2) s += x;
    return s;
  }

  int charge() const {
    return static_cast<int>(p1.size()) - static_cast<int>(p2.size()) + b;
  }

  static BasisState vacuum() { return BasisState{}; }

  friend bool operator==(const BasisState& a, const BasisState& b2) {
    return a.b == b2.b && a.p1 == b2.p1 && a.p2 == b2.p2;
  }

  // Basis order: level, then charge, then lexicographic on (p1, p2, b).
  friend bool operator<(const BasisState& a, const BasisState& b2) {
    HalfInt la = a.level(), lb = b2.level();
    if (la != lb) return la < lb;
    int ca = a.charge(), cb = b2.charge();
    if (ca != cb) return ca < cb;
    if (a.p1 != b2.p1) return a.p1 < b2.p1;
    if (a.p2 != b2.p2) return a.p2 < b2.p2;
    return a.b < b2.b;
  }

  std::string word_str(Sector sec) const {
    std::string out;
    for (auto n : p1) out += "xi(-" + n.str() + ")";
    if (b) out += "xi(0)";
    for (auto m : p2) out += "eta(-" + m.str() + ")";
    out += sec == Sector::NS ? "Om" : "mu";
    return out;
  }
};

namespace detail {

// Insert into a strictly decreasing list; returns the number of entries the
// new label moved past, or nullopt if already occupied.
inline std::optional<int> insert_label(std::vector<HalfInt>& v, HalfInt n) {
  auto it = v.begin();
  int passed = 0;
  while (it != v.end() && *it > n) {
    ++it;
    ++passed;
  }
  if (it != v.end() && *it == n) return std::nullopt;
  v.insert(it, n);
  return passed;
}

// Remove from a strictly decreasing list; returns entries in front of it.
inline std::optional<int> remove_label(std::vector<HalfInt>& v, HalfInt n) {
  auto it = v.begin();
  int passed = 0;
  while (it != v.end() && *it > n) {
    ++it;
    ++passed;
  }
  if (it == v.end() || *it != n) return std::nullopt;
  v.erase(it);
  return passed;
}

}  // namespace detail

/**
 * One fermionic mode on one canonical word: the result is again a single
 * canonical word up to sign, or zero. Signs count the anticommutations needed
 * to bring the letter to its canonical slot; annihilators contract only with
 * their matching creators ({xi_k, eta_{-k}} = 1), and eta_0 on b=0 gives 0,
 * which encodes eta_0 Omega = 0.
 */
inline std::optional<std::pair<BasisState, int>> apply_mode_core(Sector sec, ModeKind kind,
                                                                 HalfInt m,
                                                                 const BasisState& state) {
  if (!label_in_sector(sec, m))
    throw std::invalid_argument("apply_mode: label not in the sector's lattice");
  BasisState s = state;
  long l = static_cast<long>(s.p1.size());
  if (kind == ModeKind::xi) {
    if (m.twice() < 0) {
      auto j = detail::insert_label(s.p1, -m);
      if (!j) return std::nullopt;
      return std::make_pair(std::move(s), (*j % 2) ? -1 : 1);
    }
    if (m.twice() == 0) {
      if (s.b) return std::nullopt;
      s.b = 1;
      return std::make_pair(std::move(s), (l % 2) ? -1 : 1);
    }
    auto j = detail::remove_label(s.p2, m);
    if (!j) return std::nullopt;
    long swaps = l + s.b + *j;
    return std::make_pair(std::move(s), (swaps % 2) ? -1 : 1);
  }
  // eta
  if (m.twice() < 0) {
    auto j = detail::insert_label(s.p2, -m);
    if (!j) return std::nullopt;
    long swaps = l + s.b + *j;
    return std::make_pair(std::move(s), (swaps % 2) ? -1 : 1);
  }
  if (m.twice() == 0) {
    if (!s.b) return std::nullopt;  // eta_0 Omega = 0
    s.b = 0;
    return std::make_pair(std::move(s), (l % 2) ? -1 : 1);
  }
  auto j = detail::remove_label(s.p1, m);
  if (!j) return std::nullopt;
  return std::make_pair(std::move(s), (*j % 2) ? -1 : 1);
}

// Linear combination of canonical words; no zero coefficients stored.
template <class R>
using StateVector = std::map<BasisState, R>;

template <class R>
void sv_add_term(StateVector<R>& sv, const BasisState& s, const R& c) {
  if (c.is_zero()) return;
  auto it = sv.find(s);
  if (it == sv.end()) {
    sv.emplace(s, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) sv.erase(it);
  }
}

template <class R>
StateVector<R> apply_mode(Sector sec, ModeKind kind, HalfInt m, const BasisState& state,
                          const RingCtx<R>& ctx) {
  StateVector<R> out;
  if (auto r = apply_mode_core(sec, kind, m, state)) {
    R c = ctx.one();
    if (r->second < 0) c = -c;
    out.emplace(r->first, std::move(c));
  }
  return out;
}

/**
 * All canonical words with level <= max_level (and labels <= max_part when
 * given), grouped by level. Every lattice level in [0, max_level] gets a
 * block, possibly empty, so truncation windows are uniform downstream.
 */
struct GradedBasis {
  Sector sector = Sector::NS;
  HalfInt max_level{0};
  std::optional<HalfInt> max_part;
  std::vector<HalfInt> levels;
  std::map<HalfInt, std::vector<BasisState>> blocks;
  std::map<BasisState, std::pair<HalfInt, int>> index;

  int total_states() const {
    int n = 0;
    for (const auto& [lv, blk] : blocks) n += static_cast<int>(blk.size());
    return n;
  }

  const std::vector<BasisState>& block(HalfInt level) const {
    static const std::vector<BasisState> empty;
    auto it = blocks.find(level);
    return it == blocks.end() ? empty : it->second;
  }

  bool has_level(HalfInt level) const { return blocks.count(level) != 0; }
};

namespace detail {

inline void strict_partitions(const std::vector<HalfInt>& labels, std::size_t from, HalfInt room,
                              std::vector<HalfInt>& cur,
                              std::vector<std::vector<HalfInt>>& out) {
  out.push_back(cur);
  for (std::size_t i = from; i < labels.size(); ++i) {
    if (labels[i] > room) continue;  // labels descending: later ones may fit
    cur.push_back(labels[i]);
    strict_partitions(labels, i + 1, room - labels[i], cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

inline GradedBasis enumerate_basis(Sector sec, HalfInt max_level,
                                   std::optional<HalfInt> max_part = std::nullopt) {
  if (max_level < HalfInt(0)) throw std::invalid_argument("enumerate_basis: negative level");
  GradedBasis basis;
  basis.sector = sec;
  basis.max_level = max_level;
  basis.max_part = max_part;

  // Positive lattice labels, descending, capped by level and optional part bound.
  std::vector<HalfInt> labels;
  int start = sec == Sector::NS ? 2 : 1;  // twice-units: 1, 2, 3, .. or 1/2, 3/2, ..
  for (int tw = start;; tw += 2) {
    HalfInt lab = HalfInt::from_twice(tw);
    if (lab > max_level) break;
    if (max_part && lab > *max_part) break;
    labels.push_back(lab);
  }
  std::reverse(labels.begin(), labels.end());

  std::vector<std::vector<HalfInt>> cols;
  std::vector<HalfInt> cur;
  detail::strict_partitions(labels, 0, max_level, cur, cols);

  for (int tw = 0; tw <= max_level.twice(); tw += sec == Sector::NS ? 2 : 1) {
    HalfInt lv = HalfInt::from_twice(tw);
    basis.levels.push_back(lv);
    basis.blocks.emplace(lv, std::vector<BasisState>{});
  }

  for (const auto& c1 : cols) {
    HalfInt s1(0);
    for (auto x : c1) s1 += x;
    for (const auto& c2 : cols) {
      HalfInt s2(0);
      for (auto x : c2) s2 += x;
      if (s1 + s2 > max_level) continue;
      BasisState st;
      st.p1 = c1;
      st.p2 = c2;
      basis.blocks[s1 + s2].push_back(st);
      if (sector_has_zero_modes(sec)) {
        st.b = 1;
        basis.blocks[s1 + s2].push_back(st);
      }
    }
  }

  for (auto& [lv, blk] : basis.blocks) {
    std::sort(blk.begin(), blk.end());
    for (std::size_t i = 0; i < blk.size(); ++i)
      basis.index.emplace(blk[i], std::make_pair(lv, static_cast<int>(i)));
  }
  return basis;
}

}  // namespace etaxi
