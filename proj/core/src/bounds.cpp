#include "psym/bounds.hpp"

#include <algorithm>
#include <sstream>

namespace psym {

namespace {

const Q kHalf = make_q(1, 2);
const Q kQuarter = make_q(1, 4);
const Q kThreeQuarters = make_q(3, 4);

void require_feasible(const Q& V, const Q& S) {
  if (!feasibility_check(V, S, /*equal_turnout=*/true)) {
    std::string which;
    if (V < 0 || V > 1 || S < 0 || S > 1)
      which = "V and S must lie in [0,1]";
    else if (S > 2 * V)
      which = "violates S <= 2V";
    else
      which = "violates S >= 2V - 1";
    throw DomainError("(V=" + to_fraction_string(V) + ", S=" +
                      to_fraction_string(S) + ") is infeasible: " + which);
  }
}

// Largest integer k with k < x, as a plain long. x is rational.
long strict_floor(const Q& x) {
  Q f = q_floor(x);
  if (f == x) f -= 1;
  return static_cast<long>(f.get_num().get_si());
}

}  // namespace

std::string MetricInterval::to_string() const {
  if (forced_value) return "{" + to_fraction_string(*forced_value) + "}";
  std::string s = lo_closed ? "[" : "(";
  s += to_fraction_string(lo) + ", " + to_fraction_string(hi);
  s += hi_closed ? "]" : ")";
  return s;
}

// ---------------------------------------------------------------------------
// Partisan Bias ranges
// ---------------------------------------------------------------------------

MetricInterval pb_range_limit(const Q& V, const Q& S) {
  require_feasible(V, S);
  if (S < kHalf) return pb_range_limit(1 - V, 1 - S).negated();

  // Forced data on the feasibility boundaries: S = 2V pins every election to
  // winners at 1/2 and losers at 0; S = 2V - 1 to winners at 1 and losers at
  // 1/2. V = 1 (hence S = 1) is the constant election.
  if (V == 1) return MetricInterval::point(Q(0));
  if (S == 2 * V) {
    if (V == kHalf) return MetricInterval::point(Q(0));  // S = 1, all at 1/2+
    return MetricInterval::point(S - kHalf);
  }
  if (S == 2 * V - 1) return MetricInterval::point(S - kHalf);

  if (V < kHalf)
    return MetricInterval::make(S - kHalf,
                                kHalf - S * (Q(1) / (2 * V) - 1), true, false);
  if (V == kHalf)
    return MetricInterval::make((S - 1) / 2, S / 2, false, false);
  if (S == 1) {
    // Limit of the fixed-n sweep-case range [1/n - 1/2, 1/2 - 1/n].
    return MetricInterval::make(-kHalf, kHalf, false, false);
  }
  return MetricInterval::make((1 - S) * (V - kHalf) / (1 - V) - kHalf,
                              S - kHalf, false, true);
}

MetricInterval pb_range_fixed(const SVPair& p) {
  const Q& V = p.V;
  const Q& S = p.S;
  const long n = p.n;
  require_feasible(V, S);
  if (n == 1) return MetricInterval::point(Q(0));
  if (S < kHalf)
    return pb_range_fixed(SVPair::make(1 - V, 1 - S, p.n)).negated();

  if (V == 1) return MetricInterval::point(Q(0));
  if (S == 2 * V) {
    if (V == kHalf) return MetricInterval::point(Q(0));
    return MetricInterval::point(S - kHalf);
  }
  if (S == 2 * V - 1) return MetricInterval::point(S - kHalf);

  if (V == kHalf) {
    return MetricInterval::make((S - 1 + make_q(1, n)) / 2,
                                (S - make_q(1, n)) / 2, true, true);
  }
  if (V < kHalf) {
    // Largest k with (k/n)V + S/2 < V; strict since S < 2V here.
    Q x = n * (1 - S / (2 * V));
    long k = strict_floor(x);
    Q hi = S - kHalf + make_q(k, n);
    // When x is an integer, x districts can sit exactly at the mean
    // (counting in neither proportion) with the winners at exactly 1/2;
    // that beats the strict construction when x < 2.
    if (x.get_den() == 1)
      hi = std::max(hi, Q(S - kHalf + x / (2 * n)));
    return MetricInterval::make(S - kHalf, hi, true, true);
  }
  if (S == 1) {
    return MetricInterval::make(make_q(1, n) - kHalf, kHalf - make_q(1, n),
                                true, true);
  }
  // 1/2 < V < 1, S < 1. Largest k with (1-S)/2 + (k/n)V + (S - k/n) > V.
  Q x = n * (1 - (1 - S) / (2 * (1 - V)));
  long k = strict_floor(x);
  Q lo = S - kHalf - make_q(k, n);
  // Mirror of the at-mean placement above: exactly S*n - x districts above
  // the mean, the rest of the winners at the mean itself.
  if (x.get_den() == 1) {
    Q T = S * n - x;
    lo = std::min(lo, Q((T - (1 - S) * n) / (2 * n)));
  }
  return MetricInterval::make(lo, S - kHalf, true, true);
}

// ---------------------------------------------------------------------------
// Mean-Median Difference ranges
// ---------------------------------------------------------------------------

MetricInterval mm_range_limit(const Q& V, const Q& S) {
  require_feasible(V, S);
  if (S < kHalf) return mm_range_limit(1 - V, 1 - S).negated();

  if (V == 1) return MetricInterval::point(Q(0));
  if (S == 2 * V) {
    // Winners at 1/2+, losers at 0. Median 1/2 when S > 1/2, else 1/4.
    if (S == kHalf) return MetricInterval::point(Q(0));  // V = 1/4
    return MetricInterval::point(kHalf - V);
  }
  if (S == 2 * V - 1) {
    // Winners at 1, losers at 1/2-. Median 1 when S > 1/2, else 3/4.
    if (S == kHalf) return MetricInterval::point(Q(0));  // V = 3/4
    return MetricInterval::point(1 - V);
  }

  if (S == kHalf) {
    if (V < kHalf)
      return MetricInterval::make(kQuarter - V, kQuarter, true, false);
    return MetricInterval::make(-kQuarter, kThreeQuarters - V, false, true);
  }
  if (V < kThreeQuarters) {
    Q u1 = 1 - V;
    Q u2 = V - S + kHalf;
    // The cap at median 1 is attained at finite n; the other is a supremum.
    if (u1 < u2) return MetricInterval::make(kHalf - V, u1, true, true);
    return MetricInterval::make(kHalf - V, u2, true, false);
  }
  return MetricInterval::make((2 * V + S - 2) / (2 * S - 1) - V, 1 - V, false,
                              true);
}

MetricInterval mm_range_fixed(const SVPair& p) {
  const Q& V = p.V;
  const Q& S = p.S;
  const long n = p.n;
  if (n < 3)
    throw DomainError("fixed-n Mean-Median range needs n >= 3, got n = " +
                      std::to_string(p.n));
  require_feasible(V, S);
  if (S < kHalf)
    return mm_range_fixed(SVPair::make(1 - V, 1 - S, p.n)).negated();

  if (V == 1) return MetricInterval::point(Q(0));
  if (S == 2 * V) {
    if (S == kHalf) return MetricInterval::point(Q(0));
    return MetricInterval::point(kHalf - V);
  }
  if (S == 2 * V - 1) {
    if (S == kHalf) return MetricInterval::point(Q(0));
    return MetricInterval::point(1 - V);
  }

  if (S == kHalf) {
    // n is even here (S has denominator n). The constant bounds
    // +/-(1/4 - 1/(2n)) hold only while the balancing bucket stays a valid
    // loser/winner share; near the feasibility corners the envelope is the
    // linear piece through the forced corner value.
    Q lo = std::max({Q(kQuarter - V), Q(make_q(1, 2 * n) - kQuarter),
                     Q((V - kThreeQuarters) * make_q(n - 2, 2))});
    Q hi = std::min({Q(kThreeQuarters - V), Q(kQuarter - make_q(1, 2 * n)),
                     Q((V - kQuarter) * make_q(n - 2, 2))});
    return MetricInterval::make(lo, hi, true, true);
  }

  Q p_hi, p_lo;
  if (n % 2 == 0) {
    p_hi = (2 * V + kHalf - S + make_q(1, n)) / (1 + make_q(2, n));
    p_lo = (2 * V + S - 2 + make_q(2, n)) / (2 * S - 1 + make_q(2, n));
  } else {
    p_hi = (2 * V + kHalf - S + make_q(1, 2 * n)) / (1 + make_q(1, n));
    p_lo = (2 * V + S - 2 + make_q(1, n)) / (2 * S - 1 + make_q(1, n));
  }
  Q lo = std::max(Q(kHalf - V), Q(p_lo - V));
  Q hi = std::min(Q(1 - V), Q(p_hi - V));
  return MetricInterval::make(lo, hi, true, true);
}

// ---------------------------------------------------------------------------
// Zero regions
// ---------------------------------------------------------------------------

bool zero_region_contains(const Q& V, const Q& S) {
  if (!feasibility_check(V, S, /*equal_turnout=*/true)) return false;
  if (S < kHalf) return zero_region_contains(1 - V, 1 - S);
  if (S == kHalf) return true;  // every feasible V in [1/4, 3/4]
  if (V == 1) return true;      // forced constant election
  if (V < kHalf) return false;
  if (V < kThreeQuarters) return true;
  return S > (3 * V - 2) / (2 * V - 1);
}

std::pair<Q, Q> zero_region_v_interval(const Q& S) {
  if (S < kHalf) throw DomainError("zero_region_v_interval needs S >= 1/2");
  return {kHalf, (2 - S) / (3 - 2 * S)};
}

TurnoutZeroBand zero_region_turnout(const Q& S, const Q& C) {
  if (C < 1) throw DomainError("turnout ratio C must be at least 1");
  if (S < kHalf || S > 1)
    throw DomainError("zero_region_turnout needs 1/2 <= S <= 1");
  TurnoutZeroBand b;
  b.C = C;
  b.S = S;
  b.v_lo = Q(1) / (2 * (S + C * (1 - S)));
  b.v_hi = (1 + C * (3 - 2 * S)) / ((C + 1) * (3 - 2 * S));
  return b;
}

// ---------------------------------------------------------------------------
// Rasters
// ---------------------------------------------------------------------------

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::MM: return "mm";
    case Metric::PB: return "pb";
    case Metric::EG: return "eg";
    case Metric::DEC: return "dec";
  }
  return "?";
}

std::string Raster::to_csv() const {
  std::ostringstream out;
  if (kind == RasterKind::Zero) {
    out << "v,s,inside\n";
    for (int is = 0; is < resolution; ++is)
      for (int iv = 0; iv < resolution; ++iv) {
        const Cell& c = at(iv, is);
        out << to_fraction_string(coord(iv)) << ","
            << to_fraction_string(coord(is)) << ",";
        if (!c.feasible)
          out << "\n";
        else
          out << (c.inside ? 1 : 0) << "\n";
      }
    return out.str();
  }
  out << "v,s,value,closed\n";
  for (int is = 0; is < resolution; ++is)
    for (int iv = 0; iv < resolution; ++iv) {
      const Cell& c = at(iv, is);
      out << to_fraction_string(coord(iv)) << ","
          << to_fraction_string(coord(is)) << ",";
      if (!c.feasible)
        out << ",\n";
      else
        out << to_fraction_string(c.value) << "," << (c.closed ? 1 : 0)
            << "\n";
    }
  return out.str();
}

Raster region_raster(Metric metric, RasterKind kind, int resolution,
                     std::optional<int> n, std::optional<Q> turnout_ratio,
                     std::function<bool(const Q&, const Q&)> zero_delegate) {
  if (resolution < 2) throw DomainError("raster resolution must be >= 2");
  if ((metric == Metric::EG || metric == Metric::DEC) &&
      kind != RasterKind::Zero)
    throw DomainError("only the zero region is available for " +
                      metric_name(metric));
  if (metric == Metric::DEC && !zero_delegate)
    throw DomainError(
        "the Declination zero region needs an achievability search; none "
        "was supplied");

  Raster r;
  r.metric = metric;
  r.kind = kind;
  r.resolution = resolution;
  r.n = n;
  r.turnout_ratio = turnout_ratio;
  r.approximate = metric == Metric::DEC;
  r.cells.assign(static_cast<std::size_t>(resolution) * resolution, {});

  const bool turnout_free = turnout_ratio.has_value();
  for (int is = 0; is < resolution; ++is) {
    Q S = r.coord(is);
    for (int iv = 0; iv < resolution; ++iv) {
      Q V = r.coord(iv);
      Raster::Cell& cell = r.at(iv, is);
      if (!feasibility_check(V, S, /*equal_turnout=*/!turnout_free)) continue;
      cell.feasible = true;
      if (kind == RasterKind::Zero) {
        switch (metric) {
          case Metric::EG:
            cell.inside = S == 2 * V - kHalf;
            break;
          case Metric::DEC:
            cell.inside = zero_delegate(V, S);
            break;
          default:
            if (turnout_free) {
              Q s_up = S >= kHalf ? S : 1 - S;
              Q v_up = S >= kHalf ? V : 1 - V;
              cell.inside = zero_region_turnout(s_up, *turnout_ratio)
                                .contains(v_up);
            } else {
              cell.inside = zero_region_contains(V, S);
            }
        }
        continue;
      }
      // n given: S must be expressible at denominator n for fixed ranges;
      // cells that cannot host n districts stay null.
      MetricInterval interval;
      try {
        if (n.has_value()) {
          SVPair p = SVPair::make(V, S, *n);
          interval = metric == Metric::MM ? mm_range_fixed(p)
                                          : pb_range_fixed(p);
        } else {
          interval = metric == Metric::MM ? mm_range_limit(V, S)
                                          : pb_range_limit(V, S);
        }
      } catch (const DomainError&) {
        cell.feasible = false;
        continue;
      }
      if (kind == RasterKind::Min) {
        cell.value = interval.lo;
        cell.closed = interval.lo_closed;
      } else {
        cell.value = interval.hi;
        cell.closed = interval.hi_closed;
      }
    }
  }
  return r;
}

std::pair<Q, Q> metric_envelope(Metric m, std::optional<Q> V) {
  switch (m) {
    case Metric::PB:
    case Metric::EG:
      return {-kHalf, kHalf};
    case Metric::DEC:
      return {Q(-1), Q(1)};
    case Metric::MM: {
      if (V.has_value()) {
        Q s = std::min(*V, Q(1 - *V));
        return {Q(-s), s};
      }
      return {-kHalf, kHalf};
    }
  }
  return {-kHalf, kHalf};
}

}  // namespace psym
