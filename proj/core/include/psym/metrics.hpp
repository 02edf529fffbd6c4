#pragma once

#include <string>
#include <vector>

#include "psym/election.hpp"

namespace psym {

// Mean-Median Difference: median{V_i} - mean{V_i}. Computed on the bare
// district shares; turnout weights never enter.
Q mean_median(const Election& e);

// Partisan Bias: half the difference between the proportions of districts
// strictly above and strictly below the unweighted mean share. Districts at
// exactly the mean count in neither proportion. Always a multiple of 1/(2n).
Q partisan_bias(const Election& e);

// Step function (V', S') over all uniform swings of an equal-turnout
// election. Breakpoints come from the unclipped district flips at share 1/2;
// V' is the swung statewide share, so flips can land outside [0,1] when a
// district sits more than 1/2 away from the mean (those plateaus are clipped
// at the domain edges for export).
class SeatsVotesCurve {
 public:
  // v' positions at which one district flips, ascending, with multiplicity.
  const std::vector<Q>& flips() const { return flips_; }
  int n() const { return n_; }
  const Q& base_share() const { return base_share_; }

  // Seat share at a given swung statewide share. At an exact flip the
  // flipping district counts as won only if it is an original 1/2 district
  // flagged as a winner; otherwise the pre-flip value applies.
  Q seat_share_at(const Q& vprime) const;

  // Vertical midpoint of the step at vprime (the half-open jump convention
  // used by the metric extractors): (#flips < v') + (#flips == v')/2, over n.
  Q midpoint_at(const Q& vprime) const;

  // Horizontal extent [lo, hi] of the S = 1/2 crossing: lo is the largest v'
  // with S < 1/2 just below it, hi the smallest with S > 1/2 just above.
  // Odd n: a single jump (lo == hi). Even n: the S = 1/2 plateau.
  std::pair<Q, Q> half_seat_crossing() const;

  // CSV rows "v,s" tracing the step function over [0,1].
  std::string to_csv() const;

  friend SeatsVotesCurve seats_votes_curve(const Election& e);

 private:
  std::vector<Q> flips_;
  std::vector<bool> flip_wins_tie_;  // original 1/2 district flagged winner
  int n_ = 0;
  Q base_share_;
};

// Requires equal turnout (the construction equates the statewide share with
// the mean of district shares).
SeatsVotesCurve seats_votes_curve(const Election& e);

// Distance conventions that make the curve extraction agree with the direct
// definitions exactly, for every equal-turnout election:
//   MM = 1/2 - (midpoint of the curve's S=1/2 crossing)
//   PB = (vertical midpoint of the curve at V'=1/2) - 1/2
Q mm_from_curve(const SeatsVotesCurve& c);
Q pb_from_curve(const SeatsVotesCurve& c);

// Efficiency Gap under equal turnout and equal-population districts:
// S - 2V + 1/2. Positive favors party A. Requires equal turnout.
Q efficiency_gap(const Election& e);

struct MetricValue {
  Q value;
  bool defined = true;
};

// Declination, the angle-based comparison metric:
//   (2/pi) * [ atan((mean winner share - 1/2) / (w/2n))
//            - atan((1/2 - mean loser share) / (l/2n)) ]
// Undefined when either party wins no districts. The one operation not done
// in exact arithmetic: atan is evaluated to `digits` decimal digits and the
// result returned as a rational approximation.
MetricValue declination(const Election& e, int digits = 50);

// MM and PB never take strictly opposite signs, and MM = 0 forces PB = 0.
// Returns whether this election satisfies both facts (it always should).
bool sign_consistency(const Election& e);

}  // namespace psym
