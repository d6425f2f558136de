#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "etaxi/fock.hpp"
#include "etaxi/halfint.hpp"
#include "etaxi/scalars.hpp"

namespace etaxi {

/**
 * Contiguous interval of in-levels on which a truncated operator is exact.
 *
 * A fresh weight-w current is exact on level l iff both l and l - w lie in
 * [0, max_level]; sums intersect windows, and a composition is exact where
 * the inner factor is exact and lands inside the outer factor's window.
 */
struct Window {
  bool empty = false;
  HalfInt lo{0};
  HalfInt hi{0};

  static Window none() {
    Window w;
    w.empty = true;
    return w;
  }

  static Window range(HalfInt lo, HalfInt hi) {
    Window w;
    w.lo = lo;
    w.hi = hi;
    w.empty = lo > hi;
    return w;
  }

  bool contains(HalfInt l) const { return !empty && lo <= l && l <= hi; }

  Window intersect(const Window& o) const {
    if (empty || o.empty) return none();
    return range(std::max(lo, o.lo), std::min(hi, o.hi));
  }

  Window shift(HalfInt d) const {
    if (empty) return none();
    return range(lo + d, hi + d);
  }

  std::string str() const {
    if (empty) return "empty";
    return "[" + lo.str() + "," + hi.str() + "]";
  }
};

inline Window fresh_window(const GradedBasis& basis, HalfInt weight) {
  HalfInt lo = std::max(HalfInt(0), weight);
  HalfInt hi = std::min(basis.max_level, basis.max_level + weight);
  return Window::range(lo, hi);
}

struct MismatchEntry {
  std::string in_state;
  std::string out_state;
  std::string lhs;
  std::string rhs;
};

struct MatchResult {
  bool window_empty = false;
  bool ok = true;
  long columns_checked = 0;
  std::vector<MismatchEntry> mismatches;
};

/**
 * Block matrix of a fixed-weight operator over a graded basis, stored only on
 * its exactness window. Maps in-level l to out-level l - weight. Columns are
 * sparse; absent blocks are zero.
 */
template <class R>
class OperatorHandle {
 public:
  using Column = std::map<int, R>;          // row -> coeff
  using Block = std::map<int, Column>;      // col -> column
  using BlockMap = std::map<HalfInt, Block>;  // in-level -> block

  OperatorHandle(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx, HalfInt weight,
                 Window window)
      : basis_(std::move(basis)), ctx_(ctx), weight_(weight), window_(window) {}

  const GradedBasis& basis() const { return *basis_; }
  const std::shared_ptr<const GradedBasis>& basis_ptr() const { return basis_; }
  const RingCtx<R>& ctx() const { return ctx_; }
  HalfInt weight() const { return weight_; }
  const Window& window() const { return window_; }
  const BlockMap& blocks() const { return blocks_; }

  void add_entry(HalfInt in_level, int col, int row, const R& c) {
    if (c.is_zero()) return;
    auto& cell = blocks_[in_level][col];
    auto it = cell.find(row);
    if (it == cell.end()) {
      cell.emplace(row, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) cell.erase(it);
    }
  }

  static OperatorHandle zero(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx,
                             HalfInt weight) {
    return OperatorHandle(std::move(basis), ctx, weight, Window::none());
  }

  static OperatorHandle identity(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx) {
    OperatorHandle h(basis, ctx, HalfInt(0), fresh_window(*basis, HalfInt(0)));
    for (const auto& [lv, blk] : basis->blocks)
      for (int i = 0; i < static_cast<int>(blk.size()); ++i)
        h.add_entry(lv, i, i, ctx.one());
    return h;
  }

  // Projector onto words containing the level-zero creator (b = 1).
  static OperatorHandle b_projector(std::shared_ptr<const GradedBasis> basis, RingCtx<R> ctx) {
    OperatorHandle h(basis, ctx, HalfInt(0), fresh_window(*basis, HalfInt(0)));
    for (const auto& [lv, blk] : basis->blocks)
      for (int i = 0; i < static_cast<int>(blk.size()); ++i)
        if (blk[i].b) h.add_entry(lv, i, i, ctx.one());
    return h;
  }

  StateVector<R> apply_state(const BasisState& s) const {
    auto it = basis_->index.find(s);
    if (it == basis_->index.end()) throw std::invalid_argument("apply_state: not a basis state");
    auto [lv, col] = it->second;
    if (!window_.contains(lv)) throw std::domain_error("apply_state: level outside window");
    StateVector<R> out;
    auto bit = blocks_.find(lv);
    if (bit == blocks_.end()) return out;
    auto cit = bit->second.find(col);
    if (cit == bit->second.end()) return out;
    const auto& target = basis_->block(lv - weight_);
    for (const auto& [row, c] : cit->second) out.emplace(target[row], c);
    return out;
  }

  StateVector<R> apply(const StateVector<R>& sv) const {
    StateVector<R> out;
    for (const auto& [s, c] : sv)
      for (const auto& [t, d] : apply_state(s)) sv_add_term(out, t, c * d);
    return out;
  }

  OperatorHandle scale(const R& c) const {
    OperatorHandle h(basis_, ctx_, weight_, window_);
    if (c.is_zero()) return h;
    for (const auto& [lv, blk] : blocks_)
      for (const auto& [col, column] : blk)
        for (const auto& [row, v] : column) h.add_entry(lv, col, row, v * c);
    return h;
  }

  friend OperatorHandle operator+(const OperatorHandle& a, const OperatorHandle& b) {
    return combined(a, b, false);
  }

  friend OperatorHandle operator-(const OperatorHandle& a, const OperatorHandle& b) {
    return combined(a, b, true);
  }

  OperatorHandle operator-() const { return scale(-ctx_.one()); }

  // this ∘ other: other acts first.
  OperatorHandle compose(const OperatorHandle& other) const {
    check_same_basis(*this, other);
    Window win = other.window_.intersect(window_.shift(other.weight_));
    OperatorHandle h(basis_, ctx_, weight_ + other.weight_, win);
    if (win.empty) return h;
    for (const auto& [lv, blk] : other.blocks_) {
      if (!win.contains(lv)) continue;
      HalfInt mid = lv - other.weight_;
      auto ait = blocks_.find(mid);
      if (ait == blocks_.end()) continue;
      for (const auto& [col, column] : blk) {
        for (const auto& [midrow, c1] : column) {
          auto cit = ait->second.find(midrow);
          if (cit == ait->second.end()) continue;
          for (const auto& [row, c2] : cit->second) h.add_entry(lv, col, row, c1 * c2);
        }
      }
    }
    return h;
  }

  friend OperatorHandle commutator(const OperatorHandle& a, const OperatorHandle& b) {
    return a.compose(b) - b.compose(a);
  }

  friend OperatorHandle anticommutator(const OperatorHandle& a, const OperatorHandle& b) {
    return a.compose(b) + b.compose(a);
  }

  OperatorHandle restrict_window(const Window& w) const {
    Window win = window_.intersect(w);
    OperatorHandle h(basis_, ctx_, weight_, win);
    for (const auto& [lv, blk] : blocks_)
      if (win.contains(lv)) h.blocks_[lv] = blk;
    return h;
  }

  // Keep entries whose bra and ket agree (disagree) in the b flag.
  OperatorHandle b_diagonal_part(bool keep_diagonal = true) const {
    OperatorHandle h(basis_, ctx_, weight_, window_);
    for (const auto& [lv, blk] : blocks_) {
      const auto& in_blk = basis_->block(lv);
      const auto& out_blk = basis_->block(lv - weight_);
      for (const auto& [col, column] : blk)
        for (const auto& [row, v] : column) {
          bool same = in_blk[col].b == out_blk[row].b;
          if (same == keep_diagonal) h.add_entry(lv, col, row, v);
        }
    }
    return h;
  }

  friend MatchResult equal_on_window(const OperatorHandle& a, const OperatorHandle& b) {
    check_same_basis(a, b);
    if (a.weight_ != b.weight_)
      throw std::invalid_argument("equal_on_window: weight mismatch");
    MatchResult res;
    Window win = a.window_.intersect(b.window_);
    if (win.empty) {
      res.window_empty = true;
      return res;
    }
    Sector sec = a.basis_->sector;
    for (const auto& [lv, blk] : a.basis_->blocks) {
      if (!win.contains(lv)) continue;
      const auto& out_blk = a.basis_->block(lv - a.weight_);
      for (int col = 0; col < static_cast<int>(blk.size()); ++col) {
        ++res.columns_checked;
        const auto* ca = a.column(lv, col);
        const auto* cb = b.column(lv, col);
        auto diff_rows = [&](const Column* x, const Column* y) {
          std::vector<int> rows;
          if (x)
            for (const auto& [r, v] : *x) rows.push_back(r);
          if (y)
            for (const auto& [r, v] : *y)
              if (!x || !x->count(r)) rows.push_back(r);
          return rows;
        };
        for (int row : diff_rows(ca, cb)) {
          R va = ca && ca->count(row) ? ca->at(row) : a.ctx_.zero();
          R vb = cb && cb->count(row) ? cb->at(row) : a.ctx_.zero();
          if (va == vb) continue;
          res.ok = false;
          res.mismatches.push_back({blk[col].word_str(sec), out_blk[row].word_str(sec),
                                    ring_str(va), ring_str(vb)});
        }
      }
    }
    return res;
  }

  bool is_zero_on_window() const {
    for (const auto& [lv, blk] : blocks_) {
      if (!window_.contains(lv)) continue;
      for (const auto& [col, column] : blk)
        if (!column.empty()) return false;
    }
    return true;
  }

  // Weight must be zero. Scalar s with A = s * Id on the window, if any.
  std::optional<R> scalar_multiple_of_identity() const {
    if (weight_.twice() != 0 || window_.empty) return std::nullopt;
    std::optional<R> cand;
    for (const auto& [lv, blk] : basis_->blocks) {
      if (!window_.contains(lv)) continue;
      for (int col = 0; col < static_cast<int>(blk.size()); ++col) {
        const auto* c = column(lv, col);
        R diag = ctx_.zero();
        if (c) {
          for (const auto& [row, v] : *c) {
            if (row == col) {
              diag = v;
            } else if (!v.is_zero()) {
              return std::nullopt;
            }
          }
        }
        if (!cand) {
          cand = diag;
        } else if (!(*cand == diag)) {
          return std::nullopt;
        }
      }
    }
    return cand ? cand : std::optional<R>(ctx_.zero());
  }

  const Column* column(HalfInt lv, int col) const {
    auto bit = blocks_.find(lv);
    if (bit == blocks_.end()) return nullptr;
    auto cit = bit->second.find(col);
    if (cit == bit->second.end()) return nullptr;
    return &cit->second;
  }

 private:
  static void check_same_basis(const OperatorHandle& a, const OperatorHandle& b) {
    if (a.basis_ != b.basis_)
      throw std::invalid_argument("operator arithmetic: different bases");
  }

  static OperatorHandle combined(const OperatorHandle& a, const OperatorHandle& b, bool minus) {
    check_same_basis(a, b);
    if (a.weight_ != b.weight_)
      throw std::invalid_argument("operator sum: weight mismatch");
    Window win = a.window_.intersect(b.window_);
    OperatorHandle h(a.basis_, a.ctx_, a.weight_, win);
    auto pour = [&](const OperatorHandle& src, bool negate) {
      for (const auto& [lv, blk] : src.blocks_) {
        if (!win.contains(lv)) continue;
        for (const auto& [col, column] : blk)
          for (const auto& [row, v] : column)
            h.add_entry(lv, col, row, negate ? -v : v);
      }
    };
    pour(a, false);
    pour(b, minus);
    return h;
  }

  std::shared_ptr<const GradedBasis> basis_;
  RingCtx<R> ctx_;
  HalfInt weight_;
  Window window_;
  BlockMap blocks_;
};

}  // namespace etaxi
