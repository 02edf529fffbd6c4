#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "psym/election.hpp"

namespace psym {

// An achievable range of metric values with explicit endpoint strictness.
// The fixed-n ranges are closed on both sides; the unlimited-n ranges mix
// strict and non-strict endpoints, and the distinction is load-bearing for
// the oracle checks.
struct MetricInterval {
  Q lo;
  Q hi;
  bool lo_closed = true;
  bool hi_closed = true;
  std::optional<Q> forced_value;

  static MetricInterval point(Q v) {
    MetricInterval m;
    m.lo = v;
    m.hi = v;
    m.forced_value = std::move(v);
    return m;
  }
  static MetricInterval make(Q lo, Q hi, bool lo_closed, bool hi_closed) {
    MetricInterval m;
    m.lo = std::move(lo);
    m.hi = std::move(hi);
    m.lo_closed = lo_closed;
    m.hi_closed = hi_closed;
    return m;
  }

  bool contains(const Q& v) const {
    if (v < lo || v > hi) return false;
    if (v == lo && !lo_closed) return false;
    if (v == hi && !hi_closed) return false;
    return true;
  }
  // Containment in the closure [lo, hi].
  bool closure_contains(const Q& v) const { return v >= lo && v <= hi; }

  // The interval of the mirrored party: negate and swap endpoints.
  MetricInterval negated() const {
    MetricInterval m;
    m.lo = -hi;
    m.hi = -lo;
    m.lo_closed = hi_closed;
    m.hi_closed = lo_closed;
    if (forced_value) m.forced_value = Q(-*forced_value);
    return m;
  }

  std::string to_string() const;
};

// Achievable Partisan Bias values at vote share V, seat share S, with the
// district count unlimited. Inputs with S < 1/2 are served through the
// party-swap mirror; infeasible pairs raise DomainError.
MetricInterval pb_range_limit(const Q& V, const Q& S);

// Achievable Partisan Bias values at a fixed district count. Closed.
MetricInterval pb_range_fixed(const SVPair& p);

// Achievable Mean-Median Difference values, unlimited district count.
MetricInterval mm_range_limit(const Q& V, const Q& S);

// Achievable Mean-Median Difference values at fixed n >= 3 (DomainError
// below that). Closed; every endpoint is realized by the constructors.
MetricInterval mm_range_fixed(const SVPair& p);

// Whether some equal-turnout election with this (V,S) achieves MM = 0
// (equivalently PB = 0; the two regions coincide). For S >= 1/2 this is:
// the whole feasible V-range when S = 1/2; V in [1/2, 3/4); and for
// V >= 3/4, S > (3V-2)/(2V-1); plus the forced corner (1,1). S < 1/2 by
// party swap.
bool zero_region_contains(const Q& V, const Q& S);

// The V >= 1/2 branch of the zero region at seat share S >= 1/2, as a
// half-open interval [1/2, (2-S)/(3-2S)). This is exactly the turnout band
// at C = 1.
std::pair<Q, Q> zero_region_v_interval(const Q& S);

// Vote shares V* admitting MM = PB = 0 at seat share S >= 1/2 when the
// max/min turnout ratio is allowed to reach C >= 1:
// [ 1/(2(S+C(1-S))), (1+C(3-2S)) / ((C+1)(3-2S)) ).
struct TurnoutZeroBand {
  Q C;
  Q S;
  Q v_lo;  // closed
  Q v_hi;  // open
  bool contains(const Q& v) const { return v >= v_lo && v < v_hi; }
};

TurnoutZeroBand zero_region_turnout(const Q& S, const Q& C);

enum class Metric { MM, PB, EG, DEC };
enum class RasterKind { Min, Max, Zero };

std::string metric_name(Metric m);

// A grid evaluation of a range endpoint or zero-region membership over
// [0,1]^2. Cells outside the (equal-turnout) feasible region are null.
struct Raster {
  Metric metric{};
  RasterKind kind{};
  int resolution = 201;
  bool approximate = false;          // set for the Declination zero region
  std::optional<int> n;              // fixed-n endpoints when present
  std::optional<Q> turnout_ratio;    // zero region with turnout freedom

  struct Cell {
    bool feasible = false;
    Q value;          // endpoint value for Min/Max
    bool closed = true;
    bool inside = false;  // for Zero
  };
  std::vector<Cell> cells;  // row-major: index = is * resolution + iv

  Cell& at(int iv, int is) { return cells[is * resolution + iv]; }
  const Cell& at(int iv, int is) const { return cells[is * resolution + iv]; }
  Q coord(int i) const { return make_q(i, resolution - 1); }

  std::string to_csv() const;
};

// Evaluates min/max rasters for MM and PB (limit formulas, or fixed-n when n
// given) and zero rasters for MM/PB (turnout band when C given), EG (the
// line S = 2V - 1/2) and DEC. The Declination zero region has no closed
// form here; callers supply the achievability search (the oracle module
// provides one) and the result is flagged approximate.
Raster region_raster(Metric metric, RasterKind kind, int resolution,
                     std::optional<int> n = std::nullopt,
                     std::optional<Q> turnout_ratio = std::nullopt,
                     std::function<bool(const Q&, const Q&)> zero_delegate = {});

// Theoretical extreme range of a metric over election data, used for the
// 0.16-scaled acceptability band. PB and EG span [-1/2, 1/2], DEC (-1, 1).
// For MM, when the run's statewide share is supplied, the V-slice of the
// achievable envelope is min(V, 1-V) on each side.
std::pair<Q, Q> metric_envelope(Metric m, std::optional<Q> V = std::nullopt);

}  // namespace psym
