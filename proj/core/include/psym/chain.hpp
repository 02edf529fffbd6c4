#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "psym/metrics.hpp"

namespace psym::chain {

// All randomness flows from one root seed through mt19937_64 (the standard
// Mersenne Twister with 64-bit output; its stream is fixed by the C++
// standard, so runs are reproducible across platforms). Draws use rejection
// sampling, never std::uniform_int_distribution, which is not portable.
using Rng = std::mt19937_64;

std::uint64_t rand_below(Rng& rng, std::uint64_t k);

struct GeoNode {
  long pop = 0;
  long votes_a = 0;
  long votes_b = 0;
};

struct Geography {
  std::vector<GeoNode> nodes;
  std::vector<std::vector<int>> adj;
  std::vector<std::pair<double, double>> layout;  // optional, for rendering
  int rows = 0, cols = 0;  // nonzero for synthetic grids

  int size() const { return static_cast<int>(nodes.size()); }
  long total_pop() const;
  bool connected() const;
  // Node sets of the connected components (for error reporting).
  std::vector<std::vector<int>> components() const;
  // Party A's exact statewide share; independent of any districting.
  Q statewide_share() const;

  std::string to_json() const;
  static Geography from_json(const std::string& text);
};

enum class GeoKind { Uniform, Clustered, Gradient };

GeoKind geo_kind_from_string(const std::string& s);
std::string to_string(GeoKind k);

// Grid geography with a planted vote pattern, deterministic in the seed:
// uniform draws every node around `lean`; clustered plants opposing blobs
// (always at least one contiguous region with a party-A majority);
// gradient sweeps the lean monotonically across columns.
Geography synth_geography(GeoKind kind, int rows, int cols, const Q& lean,
                          std::uint64_t seed);

struct Partition {
  int d = 0;
  std::vector<int> assignment;  // node -> district id in [0, d)
  std::vector<long> pop, votes_a, votes_b;

  // Contiguous population-balanced seed plan (snake strips on grids, BFS
  // strips otherwise). Throws DomainError when the deviation bound cannot
  // be met.
  static Partition initial(const Geography& g, int d, const Q& deviation);

  void recompute(const Geography& g);
  bool tallies_consistent(const Geography& g) const;
  bool districts_connected(const Geography& g) const;
  bool within_deviation(const Geography& g, const Q& deviation) const;

  // Ties within a district go to party B.
  int seats_for_a() const;

  // Party-A share election over the districts (a district at exactly 1/2
  // carries a losing flag per the tie rule).
  Election to_election() const;
};

// One recombination move: pick a random adjacent district pair, merge, draw
// a uniform spanning tree of the union (Wilson's loop-erased walk), and cut
// an edge splitting it into two parts within the deviation bound. Returns
// the input partition unchanged (self-loop) if `max_tree_draws` trees yield
// no balanced cut.
Partition recom_step(const Partition& p, const Geography& g, Rng& rng,
                     const Q& deviation, int max_tree_draws = 50);

enum class Party { A, B };

struct PlanRecord {
  long step = 0;       // 0 is the seed plan
  int seats_party = 0; // districts won by the optimized party
  int seats_a = 0;
  Q mm, pb, eg;
  MetricValue dec;
};

struct RangeStat {
  long count = 0;
  Q min, max, sum;
  void add(const Q& v);
  Q mean() const;
  bool overlaps(const RangeStat& o) const {
    return count > 0 && o.count > 0 && !(max < o.min || o.max < min);
  }
};

struct SeatBucket {
  long plans = 0;
  RangeStat mm, pb, eg, dec;  // dec aggregates defined values only
};

struct BurstRunSummary {
  // run metadata; echoed into every output
  std::uint64_t seed = 0;
  int bursts = 0;
  int burst_len = 0;
  int districts = 0;
  Party party = Party::A;
  Q deviation;
  Q statewide_share;  // party A

  std::vector<PlanRecord> records;
  std::map<int, SeatBucket> buckets;
  std::vector<int> best_seats_by_burst;  // non-decreasing by construction

  // 0.16-scaled acceptability band per metric.
  std::map<std::string, std::pair<Q, Q>> bands;

  int min_seats() const;
  int max_seats() const;

  std::string records_csv() const;
  std::string buckets_csv() const;
};

// Runs `bursts` bursts of `burst_len` recombination steps. Within a burst
// the plan with the most seats for `party` (ties: the last one produced)
// seeds the next burst. Every visited plan is recorded.
BurstRunSummary short_burst(const Geography& g, int d, Party party,
                            int burst_len, int bursts, const Q& deviation,
                            std::uint64_t seed);

// Recomputes buckets and the acceptability bands from the records (the MM
// band uses the achievable envelope at the run's statewide share).
void summarize_ranges(BurstRunSummary& summary);

}  // namespace psym::chain
