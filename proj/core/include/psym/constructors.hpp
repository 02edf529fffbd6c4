#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psym/bounds.hpp"
#include "psym/election.hpp"

namespace psym {

// A bucket layout realizing a target election: `count` districts at `share`,
// with a tie flag when the share is exactly 1/2 and a turnout level for the
// two-level weighted constructions (0 = low, 1 = high).
struct Bucket {
  Q share;
  int count = 0;
  std::optional<bool> winner_at_half;
  int turnout_level = 0;
};

struct ConstructionPlan {
  std::vector<Bucket> buckets;
  // Free parameters chosen while realizing the layout (epsilon, delta,
  // gamma, p, k, weight ratio, ...), recorded for audit.
  std::map<std::string, Q> chosen;

  int districts() const;
  Election compile() const;
  std::string to_json() const;
};

enum class Extremum { Min, Max };

// Deterministic policy for the free small parameters the extremal layouts
// need: slack / (2 n max(1, coeff+1)), where slack is the margin of the
// tightest strict constraint at parameter 0 and coeff the largest
// coefficient multiplying the parameter in any constraint.
Q choose_epsilon(const Q& slack, long n, long coeff);

// Witness election with exactly the requested vote share, seat share and
// district count whose Partisan Bias equals the corresponding closed
// endpoint of pb_range_fixed. Self-verifies before returning.
ConstructionPlan construct_pb_extremal_plan(const SVPair& p, Extremum which);
Election construct_pb_extremal(const SVPair& p, Extremum which);

// Same for the Mean-Median Difference (n >= 3).
ConstructionPlan construct_mm_extremal_plan(const SVPair& p, Extremum which);
Election construct_mm_extremal(const SVPair& p, Extremum which);

// Witness with MM = 0 and PB = 0 at exactly (V, S). The district count is
// p.n when the layout fits; otherwise the smallest integer multiple of p.n
// that fits (seat share is preserved exactly). DomainError outside the zero
// region.
ConstructionPlan construct_zero_plan(const SVPair& p);
Election construct_zero(const SVPair& p);

// Witness with MM = PB = 0, seat share S, two-level turnout weights with
// max/min ratio <= C, and weighted statewide share exactly V_target.
// DomainError when V_target is outside the turnout band.
ConstructionPlan construct_zero_turnout_plan(const Q& S, const Q& C,
                                             const Q& V_target);
Election construct_zero_turnout(const Q& S, const Q& C, const Q& V_target);

// Interior mode: realize any Partisan Bias (resp. Mean-Median Difference)
// value strictly inside the unlimited-n achievable range at (V, S). The
// district count is chosen as needed.
Election construct_pb_value(const Q& V, const Q& S, const Q& target);
Election construct_mm_value(const Q& V, const Q& S, const Q& target);

}  // namespace psym
