#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psym/rational.hpp"

namespace psym {

// One district's two-party result for party A. A district at exactly 1/2
// carries an explicit tie winner; everywhere else the flag must be absent.
struct DistrictResult {
  Q share;
  std::optional<bool> winner_at_half;

  DistrictResult() = default;
  explicit DistrictResult(Q s) : share(std::move(s)) {}
  DistrictResult(Q s, bool wins_at_half)
      : share(std::move(s)), winner_at_half(wins_at_half) {}
};

// A vote-share / seat-share pair at a fixed district count.
// S = (n - losses)/n exactly.
struct SVPair {
  Q V;
  Q S;
  int n = 0;
  int losses = 0;

  // Validates that S has denominator n; derives the loss count.
  static SVPair make(Q V, Q S, int n);
};

// Districted election data: shares (exact rationals) in canonical ascending
// order, loser-before-winner at equal shares, with optional positive turnout
// weights summing to 1. Immutable once built.
class Election {
 public:
  // Validates all invariants; sorts districts (weights follow them).
  static Election create(std::vector<DistrictResult> districts,
                         std::optional<std::vector<Q>> weights = std::nullopt);

  // Convenience: equal-turnout election from bare shares; every share must
  // differ from 1/2 (no flags to infer).
  static Election from_shares(const std::vector<Q>& shares);

  int n() const { return static_cast<int>(districts_.size()); }
  const std::vector<DistrictResult>& districts() const { return districts_; }
  const DistrictResult& district(int i) const { return districts_[i]; }
  bool equal_turnout() const { return weights_.empty(); }
  // Equal turnout: every weight is 1/n.
  const std::vector<Q>& weights() const { return weights_; }
  Q weight(int i) const;

  bool wins(int i) const;
  int seats_won() const;

  // Turnout-weighted statewide share (arithmetic mean when equal turnout).
  Q statewide_vote_share() const;
  // Unweighted mean of district shares; what MM and PB compare against.
  Q unweighted_mean() const;
  Q median() const;  // even n: average of the two middle shares

  SVPair seat_share() const;

  // Swaps the parties: shares -> 1-share, tie winners flip, order reverses.
  Election party_swap() const;

  std::string to_json() const;
  static Election from_json(const std::string& text);

 private:
  Election() = default;
  std::vector<DistrictResult> districts_;
  std::vector<Q> weights_;  // empty means equal turnout
};

// Feasible (V,S) pairs. Equal turnout: 0<=V<=1, 0<=S<=1, S<=2V, S>=2V-1.
// Turnout free: S=1 forces V>=1/2, S=0 forces V<=1/2, otherwise 0<V<1
// (a winner's share is at least 1/2, a loser's at most 1/2, so the weighted
// mean is pinned to the corresponding half of [0,1] when one party sweeps).
bool feasibility_check(const Q& V, const Q& S, bool equal_turnout);

}  // namespace psym
