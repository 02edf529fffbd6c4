#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psym/bounds.hpp"
#include "psym/election.hpp"

namespace psym::oracle {

// Exhaustive-enumeration lattice: n districts, shares in {0, 1/D, ..., 1}.
// Enumeration runs over share multisets (the metrics are order-invariant);
// districts at exactly 1/2 enumerate both winner flags unless disabled.
struct LatticeSpec {
  int n = 3;
  int D = 20;
  bool enumerate_tie_flags = true;
  std::uint64_t budget = 100'000'000;  // multisets evaluated
  int jobs = 1;
};

// Number of multisets the spec would evaluate.
double enumeration_size(const LatticeSpec& spec);

// One witness: lattice share numerators (ascending) plus how many of the
// exact-1/2 districts are flagged winners.
struct LatticeWitness {
  std::vector<int> shares;  // numerators over D
  int half_winners = 0;

  Election to_election(int D) const;
};

// Extremes recorded for one exact (V,S) cell.
struct ExtremeRecord {
  Q min_mm, max_mm, min_pb, max_pb;
  LatticeWitness min_mm_witness, max_mm_witness, min_pb_witness,
      max_pb_witness;
};

struct AchievabilityTable {
  LatticeSpec spec;
  // Key: (share sum over D, seats won); V = sum/(nD), S = wins/n.
  std::map<std::pair<long, int>, ExtremeRecord> cells;

  Q cell_V(const std::pair<long, int>& key) const;
  Q cell_S(const std::pair<long, int>& key) const;

  std::string to_csv() const;
};

// Enumerates every lattice election and records per-(V,S) metric extremes
// with witnesses. Deterministic, independent of worker count. Throws
// BudgetError when the multiset count exceeds the budget.
AchievabilityTable enumerate_extremes(const LatticeSpec& spec);

// Hooks so the verifier can be pointed at deliberately corrupted formulas
// in tests; defaults are the bounds module plus the constructors' endpoint
// witnesses.
struct IntervalProviders {
  std::function<MetricInterval(const SVPair&)> pb_fixed;
  std::function<MetricInterval(const SVPair&)> mm_fixed;
  // Endpoint witnesses, used to decide whether a tightness gap is checkable
  // on a given lattice: an endpoint counts as lattice-representable when its
  // witness election lives entirely on the 1/D share grid.
  std::function<Election(const SVPair&, bool /*max side*/)> pb_witness;
  std::function<Election(const SVPair&, bool)> mm_witness;
  static IntervalProviders defaults();
};

struct VerifyReport {
  int n = 0;
  int D = 0;
  long cells_checked = 0;
  long containment_violations = 0;
  long tightness_violations = 0;
  // Endpoints whose witnesses need a finer share grid than 1/D; their gaps
  // are reported but cannot indict the formulas on this lattice.
  long gaps_excused = 0;
  // Worst gap among lattice-checkable endpoints, and among excused ones.
  Q worst_gap;
  Q worst_excused_gap;
  std::vector<std::string> violations;  // per-cell failure lines
  bool pass() const {
    return containment_violations == 0 && tightness_violations == 0;
  }
  std::string summary() const;
};

// Checks, for every cell: lattice extremes lie inside the theorem interval
// (containment), and each closed endpoint is approached within 2/D by the
// lattice extremes whenever a lattice-representable witness exists
// (tightness).
VerifyReport verify_bounds(const AchievabilityTable& table,
                           const IntervalProviders& providers =
                               IntervalProviders::defaults());

// Zero-achievability scan. Equal turnout: the set of (V,S) cells where some
// lattice election has MM = 0 and PB = 0 (the two conditions coincide cell
// by cell; both are recorded to prove it). With a turnout ratio C, weights
// run over all two-level patterns at ratio C and the scan records, per seat
// count, the achievable statewide-share range.
struct ZeroScan {
  LatticeSpec spec;
  std::optional<Q> turnout_ratio;
  // Equal-turnout achievable cells: (sum, wins) -> (mm_zero, pb_zero).
  std::map<std::pair<long, int>, std::pair<bool, bool>> cells;
  // Turnout scan: per seats-won, the achieved weighted-share range.
  std::map<int, std::pair<Q, Q>> vstar_range;

  bool mm_pb_masks_identical() const;
};

ZeroScan zero_achievability_scan(const LatticeSpec& spec,
                                 std::optional<Q> turnout_ratio = std::nullopt);

// Declination zero-region achievability at (V,S): some election with n
// districts on the 1/D share grid has |declination| <= tol. Enumerates the
// sufficient statistics (seats, winner share sum, loser share sum) rather
// than share multisets; declination is evaluated in double (the region is
// approximate by construction). Intended for the region raster.
std::function<bool(const Q&, const Q&)> declination_zero_searcher(
    int n = 8, int D = 40, double tol = 0.02);

}  // namespace psym::oracle
