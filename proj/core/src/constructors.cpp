#include "psym/constructors.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "psym/metrics.hpp"

namespace psym {

namespace {

const Q kHalf = make_q(1, 2);
const Q kQuarter = make_q(1, 4);
const Q kThreeQuarters = make_q(3, 4);

struct InternalError : Error {
  using Error::Error;
};

void add_bucket(ConstructionPlan& plan, Q share, long count,
                std::optional<bool> winner_at_half = std::nullopt,
                int level = 0) {
  if (count <= 0) return;
  if (share == kHalf && !winner_at_half.has_value())
    throw InternalError("bucket at 1/2 needs a flag");
  Bucket b;
  b.share = std::move(share);
  b.count = static_cast<int>(count);
  if (b.share == kHalf) b.winner_at_half = winner_at_half;
  b.turnout_level = level;
  plan.buckets.push_back(std::move(b));
}

ConstructionPlan swapped(const ConstructionPlan& plan) {
  ConstructionPlan out;
  out.chosen = plan.chosen;
  for (const auto& b : plan.buckets) {
    Bucket s = b;
    s.share = 1 - b.share;
    if (b.winner_at_half.has_value()) s.winner_at_half = !*b.winner_at_half;
    if (s.share != kHalf) s.winner_at_half.reset();
    out.buckets.push_back(std::move(s));
  }
  return out;
}

long count_districts(const ConstructionPlan& plan) {
  long n = 0;
  for (const auto& b : plan.buckets) n += b.count;
  return n;
}

void expect(bool ok, const std::string& what) {
  if (!ok) throw InternalError("constructor self-check failed: " + what);
}

void verify_pair(const Election& e, const Q& V, const Q& S) {
  expect(e.statewide_vote_share() == V, "vote share mismatch");
  expect(make_q(e.seats_won(), e.n()) == S, "seat share mismatch");
}

// Largest integer strictly below x.
long strict_floor(const Q& x) {
  Q f = q_floor(x);
  if (f == x) f -= 1;
  return static_cast<long>(f.get_num().get_si());
}

long to_long(const Q& x) {
  expect(x.get_den() == 1, "expected an integer");
  return static_cast<long>(x.get_num().get_si());
}

std::optional<bool> half_flag(const Q& share, bool winner) {
  if (share == kHalf) return winner;
  return std::nullopt;
}

// --- Partisan Bias extremal layouts (S >= 1/2 after mirroring) ------------

ConstructionPlan pb_plan_normalized(const SVPair& p, Extremum which) {
  const Q& V = p.V;
  const Q& S = p.S;
  const long n = p.n;
  const long losses = p.losses;
  const long wins = n - losses;
  ConstructionPlan plan;

  if (V == 1 || p.n == 1) {  // constant election
    add_bucket(plan, V, n, half_flag(V, S == 1));
    return plan;
  }
  if (S == 1 && V == kHalf) {
    add_bucket(plan, kHalf, n, true);
    return plan;
  }
  if (S == 2 * V) {  // forced: winners at 1/2+, losers at 0
    add_bucket(plan, kHalf, wins, true);
    add_bucket(plan, Q(0), losses);
    return plan;
  }
  if (S == 2 * V - 1) {  // forced: winners at 1, losers at 1/2-
    add_bucket(plan, Q(1), wins);
    add_bucket(plan, kHalf, losses, false);
    return plan;
  }

  if (V == kHalf) {  // S < 1, losses >= 1
    if (which == Extremum::Max) {
      Q eps = choose_epsilon(kHalf, n, wins);
      plan.chosen["epsilon"] = eps;
      add_bucket(plan, kHalf + eps, wins);
      add_bucket(plan, kHalf - wins * eps, 1);
      add_bucket(plan, kHalf, losses - 1, false);
    } else {
      Q eps = choose_epsilon(kHalf, n, losses);
      plan.chosen["epsilon"] = eps;
      add_bucket(plan, kHalf - eps, losses);
      add_bucket(plan, kHalf + losses * eps, 1);
      add_bucket(plan, kHalf, wins - 1, true);
    }
    return plan;
  }

  if (V < kHalf) {
    if (which == Extremum::Min) {
      // Winners at exactly 1/2, losers share the remaining mass evenly.
      Q pl = (V - S / 2) / (1 - S);
      plan.chosen["p"] = pl;
      add_bucket(plan, kHalf, wins, true);
      add_bucket(plan, pl, losses, half_flag(pl, false));
      return plan;
    }
    const Q x = n * (1 - S / (2 * V));
    const long k = strict_floor(x);
    plan.chosen["k"] = Q(k);
    // When x is an integer and small, x districts exactly at the mean beat
    // the strict layout.
    if (x.get_den() == 1 && Q(x / 2) > Q(k)) {
      long m = to_long(x);
      add_bucket(plan, kHalf, wins, true);
      add_bucket(plan, V, m);
      add_bucket(plan, Q(0), n - wins - m);
      plan.chosen["k"] = Q(m);
      return plan;
    }
    // wins districts at 1/2+delta, k districts at V+eps, the rest at 0,
    // with (k/n)(V+eps) + S(1/2+delta) = V.
    Q budget = V - Q(k) * V / n - S / 2;
    expect(budget > 0, "positive budget in the V<1/2 maximum");
    Q eps = 0, delta;
    if (k > 0) eps = std::min(Q(kHalf - V), Q(budget * n / (2 * k)));
    delta = (budget - Q(k) / n * eps) / S;
    expect(delta >= 0 && kHalf + delta <= 1, "delta in range");
    plan.chosen["epsilon"] = eps;
    plan.chosen["delta"] = delta;
    add_bucket(plan, kHalf + delta, wins, half_flag(kHalf + delta, true));
    add_bucket(plan, V + eps, k, half_flag(V + eps, false));
    add_bucket(plan, Q(0), n - wins - k);
    return plan;
  }

  // 1/2 < V < 1 from here.
  if (S == 1) {
    Q slack = std::min(Q(1 - V), Q(V - kHalf));
    Q eps = choose_epsilon(slack, n, n - 1);
    plan.chosen["epsilon"] = eps;
    if (which == Extremum::Max) {
      add_bucket(plan, V + eps, n - 1);
      add_bucket(plan, V - (n - 1) * eps, 1);
    } else {
      add_bucket(plan, V - eps, n - 1);
      add_bucket(plan, V + (n - 1) * eps, 1);
    }
    return plan;
  }

  if (which == Extremum::Max) {
    // Winners just above V, losers at 1/2-.
    Q eps = (1 - S) * (V - kHalf) / S;
    plan.chosen["epsilon"] = eps;
    add_bucket(plan, V + eps, wins);
    add_bucket(plan, kHalf, losses, false);
    return plan;
  }

  const Q x = n * (1 - (1 - S) / (2 * (1 - V)));
  const long k = strict_floor(x);
  if (x.get_den() == 1) {
    // At-the-mean variant: Sn - x districts at 1, the other winners exactly
    // at V, losers at 1/2-. Beats the strict layout when it gives less.
    Q T = S * n - x;
    Q at_mean_val = (T - Q(losses)) / (2 * n);
    Q strict_val = S - kHalf - make_q(k, n);
    if (at_mean_val < strict_val) {
      long t = to_long(T);
      add_bucket(plan, Q(1), t);
      add_bucket(plan, V, wins - t);
      add_bucket(plan, kHalf, losses, false);
      plan.chosen["k"] = T;
      return plan;
    }
  }
  plan.chosen["k"] = Q(k);
  // S*n - k districts at 1-gamma, k at V-eps, losses at 1/2-delta with
  // (1-S)(1/2-delta) + (k/n)(V-eps) + (S-k/n)(1-gamma) = V.
  Q budget = (1 - S) / 2 + Q(k) * V / n + (S - make_q(k, n)) - V;
  expect(budget > 0, "positive budget in the V>1/2 minimum");
  Q eps = 0;
  if (k > 0) eps = std::min(Q(V - kHalf), Q(budget * n / k));
  Q r1 = budget - Q(k) / n * eps;
  Q delta = std::min(kHalf, Q(r1 / (1 - S)));
  Q r2 = r1 - (1 - S) * delta;
  Q gamma = r2 / (S - make_q(k, n));
  expect(gamma >= 0 && 1 - gamma > V, "gamma keeps the top block above V");
  plan.chosen["epsilon"] = eps;
  plan.chosen["delta"] = delta;
  plan.chosen["gamma"] = gamma;
  add_bucket(plan, 1 - gamma, wins - k);
  add_bucket(plan, V - eps, k, half_flag(V - eps, true));
  add_bucket(plan, kHalf - delta, losses, half_flag(kHalf - delta, false));
  return plan;
}

// --- Mean-Median extremal layouts (S >= 1/2 after mirroring) --------------

ConstructionPlan mm_min_plan_normalized(const SVPair& p);

ConstructionPlan mm_plan_normalized(const SVPair& p, Extremum which) {
  const Q& V = p.V;
  const Q& S = p.S;
  const long n = p.n;
  const long losses = p.losses;
  const long wins = n - losses;
  ConstructionPlan plan;

  if (V == 1) {
    add_bucket(plan, Q(1), n);
    return plan;
  }
  if (S == 2 * V) {
    add_bucket(plan, kHalf, wins, true);
    add_bucket(plan, Q(0), losses);
    return plan;
  }
  if (S == 2 * V - 1) {
    add_bucket(plan, Q(1), wins);
    add_bucket(plan, kHalf, losses, false);
    return plan;
  }

  if (S == kHalf && which == Extremum::Max) {
    // Mirror of the minimum at the reflected vote share.
    SVPair m = SVPair::make(1 - V, kHalf, p.n);
    return swapped(mm_min_plan_normalized(m));
  }
  if (which == Extremum::Min || S == kHalf) return mm_min_plan_normalized(p);

  // Maximum, S > 1/2.
  Q ph = (n % 2 == 0)
             ? (2 * V + kHalf - S + make_q(1, n)) / (1 + make_q(2, n))
             : (2 * V + kHalf - S + make_q(1, 2 * n)) / (1 + make_q(1, n));
  const long med_block = n / 2 + 1;        // districts carrying the median
  const long half_block = n - losses - med_block;
  if (ph <= 1) {
    plan.chosen["p"] = ph;
    add_bucket(plan, Q(0), losses);
    add_bucket(plan, kHalf, half_block, true);
    add_bucket(plan, ph, med_block, half_flag(ph, true));
    return plan;
  }
  // Median pinned at 1: fill the other winners toward 1, then the losers.
  Q rest = n * V - med_block;
  Q r = half_block > 0 ? std::min(Q(1), Q(rest / half_block)) : Q(0);
  if (half_block > 0 && r < kHalf) r = kHalf;
  Q loser_mass = rest - half_block * r;
  Q ql = losses > 0 ? loser_mass / losses : Q(0);
  expect(ql >= 0 && ql <= kHalf, "loser bucket in range for the median-1 top");
  expect(losses > 0 || loser_mass == 0, "no loser mass without losers");
  plan.chosen["p"] = r;
  add_bucket(plan, Q(1), med_block);
  add_bucket(plan, r, half_block, half_flag(r, true));
  add_bucket(plan, ql, losses, half_flag(ql, false));
  return plan;
}

ConstructionPlan mm_min_plan_normalized(const SVPair& p) {
  const Q& V = p.V;
  const Q& S = p.S;
  const long n = p.n;
  const long losses = p.losses;
  const long wins = n - losses;
  ConstructionPlan plan;

  if (S == kHalf) {
    const long h = n / 2;
    if (V <= make_q(n - 1, 2 * n)) {
      // Median straddles 0 and 1/2+.
      Q q = (n * V - kHalf) / (h - 1);
      plan.chosen["p"] = q;
      add_bucket(plan, Q(0), h);
      add_bucket(plan, kHalf, 1, true);
      add_bucket(plan, q, h - 1, half_flag(q, true));
      return plan;
    }
    if (V <= make_q(3 * n - 2, 4 * n)) {
      Q pl = 2 * (V + make_q(1, 2 * n) - kHalf);
      plan.chosen["p"] = pl;
      add_bucket(plan, pl, h, half_flag(pl, false));
      add_bucket(plan, kHalf, 1, true);
      add_bucket(plan, Q(1), h - 1);
      return plan;
    }
    // Feasibility corner: losers pinned at 1/2-, one winner absorbs slack.
    Q w = n * (V - kThreeQuarters) + 1;
    plan.chosen["p"] = w;
    add_bucket(plan, kHalf, h, false);
    add_bucket(plan, w, 1, half_flag(w, true));
    add_bucket(plan, Q(1), h - 1);
    return plan;
  }

  if (V <= kHalf) {
    // Winners all at 1/2+, losers level at p: median 1/2.
    Q pl = (V - S / 2) / (1 - S);
    plan.chosen["p"] = pl;
    add_bucket(plan, kHalf, wins, true);
    add_bucket(plan, pl, losses, half_flag(pl, false));
    return plan;
  }

  const bool even = n % 2 == 0;
  const Q boundary = even ? make_q(3 * n - 2, 4 * n) : make_q(3 * n - 1, 4 * n);
  const long half_c = (even ? n / 2 + 1 : (n + 1) / 2) - losses;
  const long top_c = even ? n / 2 - 1 : (n - 1) / 2;
  if (V <= boundary) {
    // Median 1/2: losers at 1/2-, enough winners at 1/2+, rest level at p.
    Q pl = even ? make_q(4 * n, 1) * V - n - 2 : make_q(4 * n, 1) * V - n - 1;
    pl /= even ? 2 * (n - 2) : 2 * (n - 1);
    plan.chosen["p"] = pl;
    add_bucket(plan, kHalf, losses, false);
    add_bucket(plan, kHalf, half_c, true);
    add_bucket(plan, pl, top_c, half_flag(pl, true));
    return plan;
  }
  Q pl = even ? (2 * V + S - 2 + make_q(2, n)) / (2 * S - 1 + make_q(2, n))
              : (2 * V + S - 2 + make_q(1, n)) / (2 * S - 1 + make_q(1, n));
  plan.chosen["p"] = pl;
  add_bucket(plan, kHalf, losses, false);
  add_bucket(plan, pl, half_c, half_flag(pl, true));
  add_bucket(plan, Q(1), top_c);
  return plan;
}

void require_feasible_pair(const SVPair& p) {
  if (!feasibility_check(p.V, p.S, /*equal_turnout=*/true))
    throw DomainError("(V=" + to_fraction_string(p.V) + ", S=" +
                      to_fraction_string(p.S) + ") is infeasible");
}

}  // namespace

int ConstructionPlan::districts() const {
  return static_cast<int>(count_districts(*this));
}

Election ConstructionPlan::compile() const {
  std::vector<DistrictResult> ds;
  bool weighted = false;
  for (const auto& b : buckets)
    if (b.turnout_level > 0) weighted = true;

  std::optional<std::vector<Q>> weights;
  if (weighted) {
    auto it = chosen.find("weight_ratio");
    expect(it != chosen.end(), "weighted plan records its ratio");
    const Q& ratio = it->second;
    Q total = 0;
    for (const auto& b : buckets)
      total += b.count * (b.turnout_level > 0 ? ratio : Q(1));
    weights.emplace();
    for (const auto& b : buckets) {
      Q w = (b.turnout_level > 0 ? ratio : Q(1)) / total;
      for (int i = 0; i < b.count; ++i) weights->push_back(w);
    }
  }
  for (const auto& b : buckets)
    for (int i = 0; i < b.count; ++i) {
      DistrictResult d(b.share);
      d.winner_at_half = b.winner_at_half;
      ds.push_back(d);
    }
  return Election::create(std::move(ds), std::move(weights));
}

std::string ConstructionPlan::to_json() const {
  nlohmann::json j;
  j["buckets"] = nlohmann::json::array();
  for (const auto& b : buckets) {
    nlohmann::json jb;
    jb["share"] = to_fraction_string(b.share);
    jb["count"] = b.count;
    if (b.winner_at_half.has_value()) jb["winner_at_half"] = *b.winner_at_half;
    jb["turnout_level"] = b.turnout_level == 0 ? "low" : "high";
    j["buckets"].push_back(jb);
  }
  j["chosen"] = nlohmann::json::object();
  for (const auto& [name, value] : chosen)
    j["chosen"][name] = to_fraction_string(value);
  return j.dump(2);
}

Q choose_epsilon(const Q& slack, long n, long coeff) {
  if (slack <= 0)
    throw DomainError("no positive slack: the construction is forced");
  return slack / (2 * n * std::max(1L, coeff + 1));
}

ConstructionPlan construct_pb_extremal_plan(const SVPair& p, Extremum which) {
  require_feasible_pair(p);
  if (p.S < kHalf) {
    SVPair m = SVPair::make(1 - p.V, 1 - p.S, p.n);
    Extremum opp = which == Extremum::Min ? Extremum::Max : Extremum::Min;
    ConstructionPlan plan = swapped(pb_plan_normalized(m, opp));
    Election e = plan.compile();
    verify_pair(e, p.V, p.S);
    MetricInterval iv = pb_range_fixed(p);
    expect(partisan_bias(e) == (which == Extremum::Min ? iv.lo : iv.hi),
           "mirrored PB endpoint");
    return plan;
  }
  ConstructionPlan plan = pb_plan_normalized(p, which);
  Election e = plan.compile();
  verify_pair(e, p.V, p.S);
  MetricInterval iv = pb_range_fixed(p);
  expect(partisan_bias(e) == (which == Extremum::Min ? iv.lo : iv.hi),
         "PB endpoint at (V=" + to_fraction_string(p.V) + ", S=" +
             to_fraction_string(p.S) + ", n=" + std::to_string(p.n) + ")");
  return plan;
}

Election construct_pb_extremal(const SVPair& p, Extremum which) {
  return construct_pb_extremal_plan(p, which).compile();
}

ConstructionPlan construct_mm_extremal_plan(const SVPair& p, Extremum which) {
  if (p.n < 3)
    throw DomainError("Mean-Median witnesses need n >= 3, got n = " +
                      std::to_string(p.n));
  require_feasible_pair(p);
  ConstructionPlan plan;
  if (p.S < kHalf) {
    SVPair m = SVPair::make(1 - p.V, 1 - p.S, p.n);
    Extremum opp = which == Extremum::Min ? Extremum::Max : Extremum::Min;
    plan = swapped(mm_plan_normalized(m, opp));
  } else {
    plan = mm_plan_normalized(p, which);
  }
  Election e = plan.compile();
  verify_pair(e, p.V, p.S);
  MetricInterval iv = mm_range_fixed(p);
  expect(mean_median(e) == (which == Extremum::Min ? iv.lo : iv.hi),
         "MM endpoint at (V=" + to_fraction_string(p.V) + ", S=" +
             to_fraction_string(p.S) + ", n=" + std::to_string(p.n) + ")");
  return plan;
}

Election construct_mm_extremal(const SVPair& p, Extremum which) {
  return construct_mm_extremal_plan(p, which).compile();
}

// --- Zero witnesses --------------------------------------------------------

namespace {

// Zero layout for S >= 1/2 at M*n districts; M grows only in the V > 3/4
// four-bucket family.
ConstructionPlan zero_plan_normalized(const SVPair& p) {
  const Q& V = p.V;
  const Q& S = p.S;
  ConstructionPlan plan;

  if (S == 1) {  // constant election, V >= 1/2
    add_bucket(plan, V, p.n, half_flag(V, true));
    return plan;
  }
  if (S == kHalf) {
    const long h = p.n / 2;
    if (V < kHalf) {
      Q a = 2 * V - kHalf;
      add_bucket(plan, a, h, half_flag(a, false));
      add_bucket(plan, kHalf, h, true);
    } else {
      Q w = 2 * V - kHalf;
      add_bucket(plan, kHalf, h, false);
      add_bucket(plan, w, h, half_flag(w, true));
    }
    return plan;
  }
  if (V <= kThreeQuarters) {
    // losses at 2V-1, middle block exactly at the mean, losses at 1.
    Q a = 2 * V - 1;
    add_bucket(plan, a, p.losses, half_flag(a, false));
    add_bucket(plan, V, p.n - 2 * p.losses, half_flag(V, true));
    add_bucket(plan, Q(1), p.losses);
    return plan;
  }
  // V > 3/4: losers pinned at 1/2-, x winners at c just below the mean,
  // matched by x extra districts at 1. Scale the district count until the
  // below-mean block fits.
  for (long M = 1; M <= 4096; M *= 2) {
    const long n = M * p.n;
    const long losses = M * p.losses;
    Q A = losses * (2 * V - make_q(3, 2)) / (1 - V);
    // smallest integer strictly above A
    long x = static_cast<long>(q_floor(A).get_num().get_si()) + 1;
    if (x < 1) x = 1;
    long mid = n - 2 * losses - 2 * x;
    if (mid < 1) continue;
    Q c = (2 * V * (losses + x) - make_q(3, 2) * losses) / x - 1;
    if (c < kHalf || c >= V) continue;
    plan.chosen["x"] = Q(x);
    plan.chosen["c"] = c;
    add_bucket(plan, kHalf, losses, false);
    add_bucket(plan, c, x, half_flag(c, true));
    add_bucket(plan, V, mid);
    add_bucket(plan, Q(1), losses + x);
    return plan;
  }
  throw DomainError("no zero layout found at (V=" + to_fraction_string(V) +
                    ", S=" + to_fraction_string(S) + ")");
}

void verify_zero(const Election& e, const Q& S) {
  expect(mean_median(e) == 0, "zero witness has MM = 0");
  expect(partisan_bias(e) == 0, "zero witness has PB = 0");
  expect(make_q(e.seats_won(), e.n()) == S, "zero witness seat share");
}

}  // namespace

ConstructionPlan construct_zero_plan(const SVPair& p) {
  if (!zero_region_contains(p.V, p.S))
    throw DomainError("(V=" + to_fraction_string(p.V) + ", S=" +
                      to_fraction_string(p.S) +
                      ") is outside the zero region");
  ConstructionPlan plan;
  if (p.S < kHalf) {
    plan = swapped(zero_plan_normalized(SVPair::make(1 - p.V, 1 - p.S, p.n)));
  } else {
    plan = zero_plan_normalized(p);
  }
  Election e = plan.compile();
  expect(e.statewide_vote_share() == p.V, "zero witness vote share");
  verify_zero(e, p.S);
  return plan;
}

Election construct_zero(const SVPair& p) { return construct_zero_plan(p).compile(); }

ConstructionPlan construct_zero_turnout_plan(const Q& S, const Q& C,
                                             const Q& V_target) {
  if (S < kHalf || S > 1)
    throw DomainError("construct_zero_turnout needs 1/2 <= S <= 1");
  TurnoutZeroBand band = zero_region_turnout(S, C);
  if (!band.contains(V_target))
    throw DomainError("V = " + to_fraction_string(V_target) +
                      " is outside the turnout zero band [" +
                      to_fraction_string(band.v_lo) + ", " +
                      to_fraction_string(band.v_hi) + ")");

  const long n0 = static_cast<long>(S.get_den().get_si());
  const long n = n0 % 2 == 0 ? n0 : 2 * n0;  // even keeps medians simple
  const long losses = n - to_long(S * n);

  ConstructionPlan plan;
  Q upper_eq = (2 - S) / (3 - 2 * S);

  if (V_target < kHalf) {
    // Zeros carry the extra weight; 1/2-shares win, matched by 1-shares.
    Q ratio = losses > 0
                  ? (Q(n) / (2 * V_target) - n + losses) / losses
                  : Q(1);
    expect(ratio >= 1 && ratio <= C, "lower-side weight ratio within C");
    plan.chosen["weight_ratio"] = ratio;
    add_bucket(plan, Q(0), losses, std::nullopt, 1);
    add_bucket(plan, kHalf, n - 2 * losses, true);
    add_bucket(plan, Q(1), losses);
  } else if (V_target < upper_eq) {
    plan = construct_zero_plan(SVPair::make(V_target, S, n));
  } else {
    // Upper side: weight the top bucket of an equal-turnout zero witness at
    // an interior mean V0, solving for the ratio w <= C.
    bool found = false;
    for (int j = 1; j <= 60 && !found; ++j) {
      mpz_class p2;
      mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(j));
      Q V0 = upper_eq - (upper_eq - kHalf) / Q(p2);
      for (long M = 1; M <= 64 && !found; M *= 2) {
        ConstructionPlan base;
        try {
          base = construct_zero_plan(SVPair::make(V0, S, M * n));
        } catch (const DomainError&) {
          continue;
        }
        // Top bucket = largest share.
        std::size_t top = 0;
        for (std::size_t i = 1; i < base.buckets.size(); ++i)
          if (base.buckets[i].share > base.buckets[top].share) top = i;
        const Q s_top = base.buckets[top].share;
        const long c_top = base.buckets[top].count;
        const long nn = count_districts(base);
        if (s_top <= V_target) continue;
        Q w = 1 + nn * (V_target - V0) / (c_top * (s_top - V_target));
        if (w < 1 || w > C) continue;
        base.buckets[top].turnout_level = 1;
        base.chosen["weight_ratio"] = w;
        base.chosen["v0"] = V0;
        plan = std::move(base);
        found = true;
      }
    }
    if (!found)
      throw DomainError("no weighted zero layout reached V = " +
                        to_fraction_string(V_target) + " within C = " +
                        to_fraction_string(C));
  }

  Election e = plan.compile();
  verify_zero(e, S);
  expect(e.statewide_vote_share() == V_target, "weighted vote share");
  return plan;
}

Election construct_zero_turnout(const Q& S, const Q& C, const Q& V_target) {
  return construct_zero_turnout_plan(S, C, V_target).compile();
}

// --- Interior targets ------------------------------------------------------

namespace {

long lcm_long(long a, long b) {
  mpz_class g;
  mpz_class ma(a), mb(b);
  mpz_lcm(g.get_mpz_t(), ma.get_mpz_t(), mb.get_mpz_t());
  return g.get_si();
}

// PB target at (V,S) with S >= 1/2; the caller verified t is attainable.
ConstructionPlan pb_value_plan(const Q& V, const Q& S, const Q& t) {
  const Q d2q = 2 * (t - S + kHalf);  // signed offset, in units of 1/n
  long base = lcm_long(static_cast<long>(S.get_den().get_si()),
                       static_cast<long>(Q(2 * t).get_den().get_si()));
  base = lcm_long(base, static_cast<long>(d2q.get_den().get_si()));
  if (base % 2 == 1) base *= 2;

  for (long M = 1; M <= 4096; M *= 2) {
    const long n = M * base;
    SVPair p = SVPair::make(V, S, static_cast<int>(n));
    MetricInterval iv = pb_range_fixed(p);
    if (!iv.contains(t)) continue;
    const long wins = n - p.losses;
    ConstructionPlan plan;

    if (V == kHalf) {
      long d = to_long(Q(2 * t * n));
      long a = d >= 0 ? d : 0;
      long b = d >= 0 ? 0 : -d;
      if (a == 0 && b == 0 && t != 0) continue;
      if (d != 0) {
        ++a;
        ++b;
      }
      if (a > wins || b > p.losses) continue;
      Q eps = make_q(1, 4 * n * std::max({a, b, 1L}));
      Q delta = b > 0 ? Q(Q(a) * eps / b) : Q(0);
      plan.chosen["epsilon"] = eps;
      add_bucket(plan, kHalf + eps, a);
      add_bucket(plan, kHalf - delta, b);
      add_bucket(plan, kHalf, wins - a, true);
      add_bucket(plan, kHalf, p.losses - b, false);
    } else if (V < kHalf) {
      long d2 = to_long(Q(d2q * n));  // = 2*(#above - wins) + at-mean count
      if (d2 < 0) continue;
      long j = d2 / 2, at_mean = d2 % 2;
      // (j/n)eps + S*delta = V - (j+at_mean)V/n - S/2 must be positive.
      Q budget = V - Q(j + at_mean) * V / n - S / 2;
      if (budget <= 0) continue;
      if (wins + j + at_mean > n) continue;
      Q eps = 0;
      if (j > 0) eps = std::min(Q(kHalf - V), Q(budget * n / (2 * j)));
      Q delta = (budget - Q(j) / n * eps) / S;
      if (delta < 0 || kHalf + delta > 1) continue;
      plan.chosen["epsilon"] = eps;
      plan.chosen["delta"] = delta;
      add_bucket(plan, kHalf + delta, wins, half_flag(kHalf + delta, true));
      add_bucket(plan, V + eps, j, half_flag(V + eps, false));
      add_bucket(plan, V, at_mean);
      add_bucket(plan, Q(0), n - wins - j - at_mean);
    } else if (S == 1) {
      long d = to_long(Q(2 * t * n));
      long a = d >= 0 ? d : 0;
      long b = d >= 0 ? 0 : -d;
      if (d != 0) {
        ++a;
        ++b;
      }
      if (a + b > n) continue;
      Q slack = std::min(Q(1 - V), Q(V - kHalf));
      Q eps = choose_epsilon(slack, n, std::max(a, b));
      Q delta = b > 0 ? Q(Q(a) * eps / b) : Q(0);
      if (a == 0 && b == 0 && t != 0) continue;
      plan.chosen["epsilon"] = eps;
      add_bucket(plan, V + eps, a);
      add_bucket(plan, V - delta, b);
      add_bucket(plan, V, n - a - b);
    } else {
      long d2 = to_long(Q(-d2q * n));
      if (d2 < 0) continue;
      long j = d2 / 2, at_mean = d2 % 2;
      Q budget =
          (1 - S) / 2 + Q(j + at_mean) * V / n + (S - make_q(j + at_mean, n)) -
          V;
      if (budget <= 0) continue;
      if (j + at_mean > wins) continue;
      Q eps = 0;
      if (j > 0) eps = std::min(Q(V - kHalf), Q(budget * n / j));
      Q r1 = budget - Q(j) / n * eps;
      Q delta = std::min(kHalf, Q(r1 / (1 - S)));
      Q r2 = r1 - (1 - S) * delta;
      Q denom = S - make_q(j + at_mean, n);
      if (denom <= 0) continue;
      Q gamma = r2 / denom;
      if (gamma < 0 || 1 - gamma <= V) continue;
      plan.chosen["epsilon"] = eps;
      plan.chosen["delta"] = delta;
      plan.chosen["gamma"] = gamma;
      add_bucket(plan, 1 - gamma, wins - j - at_mean);
      add_bucket(plan, V, at_mean);
      add_bucket(plan, V - eps, j, half_flag(V - eps, true));
      add_bucket(plan, kHalf - delta, p.losses,
                 half_flag(kHalf - delta, false));
    }

    Election e = plan.compile();
    if (e.statewide_vote_share() != V) continue;
    if (make_q(e.seats_won(), e.n()) != S) continue;
    if (partisan_bias(e) != t) continue;
    return plan;
  }
  throw DomainError("no layout found for PB = " + to_fraction_string(t) +
                    " at (V=" + to_fraction_string(V) + ", S=" +
                    to_fraction_string(S) + ")");
}

// MM target at (V,S) with S >= 1/2.
ConstructionPlan mm_value_plan(const Q& V, const Q& S, const Q& t) {
  const Q med = V + t;
  long base = static_cast<long>(S.get_den().get_si());
  if (base % 2 == 1) base *= 2;

  for (long M = 1; M <= 4096; M *= 2) {
    const long n = M * base;
    if (n < 4) continue;
    SVPair p = SVPair::make(V, S, static_cast<int>(n));
    const long losses = p.losses;
    ConstructionPlan plan;

    if (S == kHalf) {
      const long h = n / 2;
      Q m_lo, m_hi;
      if (med >= kHalf) {
        m_lo = kHalf;
        m_hi = 2 * med - kHalf;
      } else {
        m_hi = kHalf;
        m_lo = 2 * med - kHalf;
      }
      if (m_lo < 0 || m_hi > 1) continue;
      Q ab = (n * V - 2 * med) / (h - 1);
      // a in [0, m_lo], b in [m_hi, 1], a + b = ab: waterfill b first.
      Q b = std::min(Q(1), Q(ab));
      if (b < m_hi) b = m_hi;
      Q a = ab - b;
      if (a < 0 || a > m_lo || b > 1) continue;
      plan.chosen["p"] = m_hi;
      add_bucket(plan, a, h - 1, half_flag(a, false));
      add_bucket(plan, m_lo, 1, half_flag(m_lo, false));
      add_bucket(plan, m_hi, 1, half_flag(m_hi, true));
      add_bucket(plan, b, h - 1, half_flag(b, true));
    } else {
      if (med < kHalf || med > 1) continue;
      // Losers level at q, a filler block at 1/2+, the median block at
      // V + t, and a top block at 1; two integer knobs plus q.
      bool built = false;
      for (long half_c = 0; half_c <= n / 2 - 1 - losses && !built;
           ++half_c) {
        for (long top = n / 2 - 1; top >= 0 && !built; --top) {
          long mid = n - losses - half_c - top;
          if (losses + half_c + mid < n / 2 + 1) continue;
          if (mid < 1) continue;
          Q mass = n * V - Q(half_c) / 2 - mid * med - top;
          Q q = losses > 0 ? Q(mass / losses) : Q(0);
          if (losses > 0 && (q < 0 || q > kHalf)) continue;
          if (losses == 0 && mass != 0) continue;
          plan.chosen["p"] = med;
          add_bucket(plan, q, losses, half_flag(q, false));
          add_bucket(plan, kHalf, half_c, true);
          add_bucket(plan, med, mid, half_flag(med, true));
          add_bucket(plan, Q(1), top);
          built = true;
        }
      }
      if (!built) continue;
    }

    Election e = plan.compile();
    if (e.statewide_vote_share() != V) continue;
    if (make_q(e.seats_won(), e.n()) != S) continue;
    if (mean_median(e) != t) continue;
    return plan;
  }
  throw DomainError("no layout found for MM = " + to_fraction_string(t) +
                    " at (V=" + to_fraction_string(V) + ", S=" +
                    to_fraction_string(S) + ")");
}

}  // namespace

Election construct_pb_value(const Q& V, const Q& S, const Q& target) {
  if (!feasibility_check(V, S, true))
    throw DomainError("infeasible pair for a PB target");
  MetricInterval iv = pb_range_limit(V, S);
  if (iv.forced_value) {
    if (target != *iv.forced_value)
      throw DomainError("PB is forced to " +
                        to_fraction_string(*iv.forced_value) + " here");
    SVPair p = SVPair::make(V, S, static_cast<int>(S.get_den().get_si()));
    return construct_pb_extremal(p, Extremum::Max);
  }
  if (!iv.contains(target))
    throw DomainError("PB target " + to_fraction_string(target) +
                      " outside the achievable range " + iv.to_string());
  if (S < kHalf)
    return construct_pb_value(1 - V, 1 - S, -target).party_swap();
  return pb_value_plan(V, S, target).compile();
}

Election construct_mm_value(const Q& V, const Q& S, const Q& target) {
  if (!feasibility_check(V, S, true))
    throw DomainError("infeasible pair for an MM target");
  MetricInterval iv = mm_range_limit(V, S);
  if (iv.forced_value) {
    if (target != *iv.forced_value)
      throw DomainError("MM is forced to " +
                        to_fraction_string(*iv.forced_value) + " here");
    long step = static_cast<long>(S.get_den().get_si());
    long n0 = step;
    while (n0 < 3) n0 += step;
    SVPair p = SVPair::make(V, S, static_cast<int>(n0));
    return construct_mm_extremal(p, Extremum::Max);
  }
  if (!iv.contains(target))
    throw DomainError("MM target " + to_fraction_string(target) +
                      " outside the achievable range " + iv.to_string());
  if (S < kHalf)
    return construct_mm_value(1 - V, 1 - S, -target).party_swap();
  return mm_value_plan(V, S, target).compile();
}

}  // namespace psym
