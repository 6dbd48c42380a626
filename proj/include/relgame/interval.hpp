#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "relgame/rational.hpp"

namespace relgame {

struct Bound {
  Rational value;
  bool closed = true;

  friend bool operator==(const Bound&, const Bound&) = default;
};

/// A convex subset of the rationals. A missing bound means unbounded on that
/// side. An empty interval has no bounds and `is_empty()` set.
class Interval {
 public:
  Interval() = default;  // the whole line

  static Interval all() { return Interval(); }
  static Interval empty() {
    Interval out;
    out.empty_ = true;
    return out;
  }
  static Interval closed(Rational lo, Rational hi) {
    return Interval(Bound{std::move(lo), true}, Bound{std::move(hi), true});
  }
  static Interval open(Rational lo, Rational hi) {
    return Interval(Bound{std::move(lo), false}, Bound{std::move(hi), false});
  }
  static Interval at_least(Rational lo, bool closed = true) {
    return Interval(Bound{std::move(lo), closed}, std::nullopt);
  }
  static Interval at_most(Rational hi, bool closed = true) {
    return Interval(std::nullopt, Bound{std::move(hi), closed});
  }

  Interval(std::optional<Bound> lower, std::optional<Bound> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    normalize();
  }

  bool is_empty() const { return empty_; }
  bool is_bounded() const { return !empty_ && lower_ && upper_; }
  const std::optional<Bound>& lower() const { return lower_; }
  const std::optional<Bound>& upper() const { return upper_; }

  bool contains(const Rational& r) const {
    if (empty_) return false;
    if (lower_ && (lower_->closed ? r < lower_->value : r <= lower_->value))
      return false;
    if (upper_ && (upper_->closed ? r > upper_->value : r >= upper_->value))
      return false;
    return true;
  }

  Interval intersect(const Interval& other) const {
    if (empty_ || other.empty_) return empty();
    return Interval(tighter(lower_, other.lower_, true),
                    tighter(upper_, other.upper_, false));
  }

  /// Smallest interval containing both.
  Interval hull(const Interval& other) const {
    if (empty_) return other;
    if (other.empty_) return *this;
    return Interval(looser(lower_, other.lower_, true),
                    looser(upper_, other.upper_, false));
  }

  Rational midpoint() const {
    if (!is_bounded()) throw std::logic_error("midpoint of an unbounded interval");
    return (lower_->value + upper_->value) / 2;
  }

  std::string to_string() const {
    if (empty_) return "empty";
    std::string out;
    out += lower_ ? (lower_->closed ? "[" : "(") + relgame::to_string(lower_->value)
                  : std::string("(-inf");
    out += ", ";
    out += upper_ ? relgame::to_string(upper_->value) + (upper_->closed ? "]" : ")")
                  : std::string("+inf)");
    return out;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  void normalize() {
    if (empty_ || !lower_ || !upper_) return;
    if (lower_->value > upper_->value ||
        (lower_->value == upper_->value && !(lower_->closed && upper_->closed))) {
      *this = empty();
    }
  }

  // is_lower selects which direction counts as "tighter".
  static std::optional<Bound> tighter(const std::optional<Bound>& a,
                                      const std::optional<Bound>& b, bool is_lower) {
    if (!a) return b;
    if (!b) return a;
    if (a->value == b->value) return Bound{a->value, a->closed && b->closed};
    bool a_wins = is_lower ? a->value > b->value : a->value < b->value;
    return a_wins ? a : b;
  }

  static std::optional<Bound> looser(const std::optional<Bound>& a,
                                     const std::optional<Bound>& b, bool is_lower) {
    if (!a || !b) return std::nullopt;
    if (a->value == b->value) return Bound{a->value, a->closed || b->closed};
    bool a_wins = is_lower ? a->value < b->value : a->value > b->value;
    return a_wins ? a : b;
  }

  std::optional<Bound> lower_;
  std::optional<Bound> upper_;
  bool empty_ = false;
};

/// Solution set of `constant + slope * r >= 0` (or `> 0` when strict).
inline Interval linear_inequality_solutions(const Rational& constant,
                                            const Rational& slope, bool strict) {
  if (slope == 0) {
    bool holds = strict ? constant > 0 : constant >= 0;
    return holds ? Interval::all() : Interval::empty();
  }
  Rational root = -constant / slope;
  return slope > 0 ? Interval::at_least(root, !strict) : Interval::at_most(root, !strict);
}

}  // namespace relgame
