#include "psym/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "psym/constructors.hpp"

namespace psym::oracle {

namespace {

// C(D+n, n) without overflow for the sizes in play.
double binomial(double a, int b) {
  double r = 1;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

// Metric values for a sorted lattice multiset, as integer numerators.
// MM = mm_num / (2nD), PB = (above - below) / (2n).
struct LatticeMetrics {
  long mm_num;
  int above;
  int below;
  int wins_base;  // shares strictly above D/2
  int half_count; // shares exactly D/2 (0 when D is odd)
};

LatticeMetrics lattice_metrics(const std::vector<int>& js, long sum, int n,
                               int D) {
  LatticeMetrics m{};
  int a = (n - 1) / 2, b = n / 2;
  m.mm_num = static_cast<long>(n) * (js[a] + js[b]) - 2 * sum;
  for (int j : js) {
    long lhs = static_cast<long>(j) * n;
    if (lhs > sum)
      ++m.above;
    else if (lhs < sum)
      ++m.below;
    if (2 * j > D)
      ++m.wins_base;
    else if (2 * j == D)
      ++m.half_count;
  }
  return m;
}

struct RawExtremes {
  long mm_min, mm_max;  // over 2nD
  int pb_min, pb_max;   // above - below, over 2n
  LatticeWitness w_mm_min, w_mm_max, w_pb_min, w_pb_max;
  bool init = false;
};

using RawTable = std::map<std::pair<long, int>, RawExtremes>;

void record(RawTable& table, long sum, int wins, const LatticeMetrics& m,
            const std::vector<int>& js, int half_winners) {
  RawExtremes& e = table[{sum, wins}];
  const int pb = m.above - m.below;
  if (!e.init) {
    e.init = true;
    e.mm_min = e.mm_max = m.mm_num;
    e.pb_min = e.pb_max = pb;
    e.w_mm_min = e.w_mm_max = e.w_pb_min = e.w_pb_max =
        LatticeWitness{js, half_winners};
    return;
  }
  if (m.mm_num < e.mm_min) {
    e.mm_min = m.mm_num;
    e.w_mm_min = {js, half_winners};
  }
  if (m.mm_num > e.mm_max) {
    e.mm_max = m.mm_num;
    e.w_mm_max = {js, half_winners};
  }
  if (pb < e.pb_min) {
    e.pb_min = pb;
    e.w_pb_min = {js, half_winners};
  }
  if (pb > e.pb_max) {
    e.pb_max = pb;
    e.w_pb_max = {js, half_winners};
  }
}

// Enumerates non-decreasing share vectors with js[0] in [first_lo, first_hi].
template <typename Visit>
void enumerate_multisets(int n, int D, int first_lo, int first_hi,
                         Visit&& visit) {
  std::vector<int> js(n);
  // Iterative odometer over non-decreasing sequences.
  auto rec = [&](auto&& self, int pos, int lo, long sum) -> void {
    if (pos == n) {
      visit(js, sum);
      return;
    }
    int hi = (pos == 0) ? first_hi : D;
    for (int j = lo; j <= hi; ++j) {
      js[pos] = j;
      self(self, pos + 1, j, sum + j);
    }
  };
  rec(rec, 0, first_lo, 0);
}

void merge_raw(RawTable& into, const RawTable& from) {
  for (const auto& [key, e] : from) {
    auto it = into.find(key);
    if (it == into.end()) {
      into.emplace(key, e);
      continue;
    }
    RawExtremes& t = it->second;
    if (e.mm_min < t.mm_min) {
      t.mm_min = e.mm_min;
      t.w_mm_min = e.w_mm_min;
    }
    if (e.mm_max > t.mm_max) {
      t.mm_max = e.mm_max;
      t.w_mm_max = e.w_mm_max;
    }
    if (e.pb_min < t.pb_min) {
      t.pb_min = e.pb_min;
      t.w_pb_min = e.w_pb_min;
    }
    if (e.pb_max > t.pb_max) {
      t.pb_max = e.pb_max;
      t.w_pb_max = e.w_pb_max;
    }
  }
}

void check_budget(const LatticeSpec& spec, const char* what) {
  double size = enumeration_size(spec);
  if (size > static_cast<double>(spec.budget)) {
    std::ostringstream msg;
    msg << what << " at n=" << spec.n << ", D=" << spec.D << " needs ~" << size
        << " multisets, over the budget of " << spec.budget;
    throw BudgetError(msg.str(), size);
  }
}

RawTable enumerate_raw(const LatticeSpec& spec) {
  check_budget(spec, "enumeration");
  const int n = spec.n, D = spec.D;

  auto run_slice = [&](int lo, int hi) {
    RawTable table;
    enumerate_multisets(n, D, lo, hi, [&](const std::vector<int>& js,
                                          long sum) {
      LatticeMetrics m = lattice_metrics(js, sum, n, D);
      if (spec.enumerate_tie_flags) {
        for (int w = 0; w <= m.half_count; ++w)
          record(table, sum, m.wins_base + w, m, js, w);
      } else {
        record(table, sum, m.wins_base, m, js, 0);
      }
    });
    return table;
  };

  if (spec.jobs <= 1) return run_slice(0, D);

  // Slices by leading share keep results identical to the sequential run:
  // within a slice the lexicographically first witness wins ties, and the
  // merge processes slices in ascending order.
  std::vector<std::future<RawTable>> parts;
  int per = std::max(1, (D + 1) / spec.jobs);
  for (int lo = 0; lo <= D; lo += per) {
    int hi = std::min(D, lo + per - 1);
    parts.push_back(std::async(std::launch::async, run_slice, lo, hi));
  }
  RawTable table;
  for (auto& f : parts) merge_raw(table, f.get());
  return table;
}

}  // namespace

double enumeration_size(const LatticeSpec& spec) {
  return binomial(static_cast<double>(spec.D + spec.n), spec.n);
}

Election LatticeWitness::to_election(int D) const {
  std::vector<DistrictResult> ds;
  ds.reserve(shares.size());
  int half_seen = 0;
  for (int j : shares) {
    DistrictResult d(make_q(j, D));
    if (2 * j == D) {
      // Losers sort before winners; flag the last `half_winners` ties.
      int half_total = 0;
      for (int k : shares)
        if (2 * k == D) ++half_total;
      d.winner_at_half = half_seen >= half_total - half_winners;
      ++half_seen;
    }
    ds.push_back(std::move(d));
  }
  return Election::create(std::move(ds));
}

Q AchievabilityTable::cell_V(const std::pair<long, int>& key) const {
  return make_q(key.first, static_cast<long>(spec.n) * spec.D);
}

Q AchievabilityTable::cell_S(const std::pair<long, int>& key) const {
  return make_q(key.second, spec.n);
}

std::string AchievabilityTable::to_csv() const {
  std::ostringstream out;
  out << "v_num,v_den,s_num,s_den,min_mm,max_mm,min_pb,max_pb\n";
  for (const auto& [key, e] : cells) {
    Q v = cell_V(key), s = cell_S(key);
    out << v.get_num() << "," << v.get_den() << "," << s.get_num() << ","
        << s.get_den() << "," << to_fraction_string(e.min_mm) << ","
        << to_fraction_string(e.max_mm) << "," << to_fraction_string(e.min_pb)
        << "," << to_fraction_string(e.max_pb) << "\n";
  }
  return out.str();
}

AchievabilityTable enumerate_extremes(const LatticeSpec& spec) {
  RawTable raw = enumerate_raw(spec);
  AchievabilityTable out;
  out.spec = spec;
  const long n = spec.n, D = spec.D;
  for (auto& [key, e] : raw) {
    ExtremeRecord r;
    r.min_mm = make_q(e.mm_min, 2 * n * D);
    r.max_mm = make_q(e.mm_max, 2 * n * D);
    r.min_pb = make_q(e.pb_min, 2 * n);
    r.max_pb = make_q(e.pb_max, 2 * n);
    r.min_mm_witness = std::move(e.w_mm_min);
    r.max_mm_witness = std::move(e.w_mm_max);
    r.min_pb_witness = std::move(e.w_pb_min);
    r.max_pb_witness = std::move(e.w_pb_max);
    out.cells.emplace(key, std::move(r));
  }
  return out;
}

IntervalProviders IntervalProviders::defaults() {
  IntervalProviders p;
  p.pb_fixed = [](const SVPair& sv) { return pb_range_fixed(sv); };
  p.mm_fixed = [](const SVPair& sv) { return mm_range_fixed(sv); };
  p.pb_witness = [](const SVPair& sv, bool max) {
    return construct_pb_extremal(sv, max ? Extremum::Max : Extremum::Min);
  };
  p.mm_witness = [](const SVPair& sv, bool max) {
    return construct_mm_extremal(sv, max ? Extremum::Max : Extremum::Min);
  };
  return p;
}

std::string VerifyReport::summary() const {
  std::ostringstream out;
  out << "n=" << n << " D=" << D << ": " << cells_checked << " cells, "
      << containment_violations << " containment violations, "
      << tightness_violations << " tightness violations, worst checkable gap "
      << to_fraction_string(worst_gap) << " (allowed "
      << to_fraction_string(make_q(2, D)) << "), " << gaps_excused
      << " endpoints off-lattice (worst gap "
      << to_fraction_string(worst_excused_gap) << ")";
  return out.str();
}

namespace {

bool on_lattice(const Election& e, int D) {
  for (const auto& d : e.districts())
    if (mpz_divisible_p(mpz_class(D).get_mpz_t(),
                        d.share.get_den().get_mpz_t()) == 0)
      return false;
  return true;
}

}  // namespace

VerifyReport verify_bounds(const AchievabilityTable& table,
                           const IntervalProviders& providers) {
  VerifyReport rep;
  rep.n = table.spec.n;
  rep.D = table.spec.D;
  rep.worst_gap = 0;
  rep.worst_excused_gap = 0;
  const Q allowed = make_q(2, table.spec.D);
  const bool check_mm = table.spec.n >= 3;

  for (const auto& [key, e] : table.cells) {
    ++rep.cells_checked;
    Q V = table.cell_V(key);
    Q S = table.cell_S(key);
    SVPair p = SVPair::make(V, S, table.spec.n);

    auto check = [&](const char* name, const MetricInterval& iv, const Q& lo,
                     const Q& hi,
                     const std::function<Election(const SVPair&, bool)>&
                         witness) {
      if (!iv.contains(lo) || !iv.contains(hi)) {
        ++rep.containment_violations;
        rep.violations.push_back(
            "containment " + std::string(name) + " at (V=" +
            to_fraction_string(V) + ", S=" + to_fraction_string(S) +
            "): lattice [" + to_fraction_string(lo) + ", " +
            to_fraction_string(hi) + "] vs theorem " + iv.to_string());
        return;
      }
      auto side = [&](const Q& gap, bool max_side) {
        if (gap <= allowed) {
          rep.worst_gap = std::max(rep.worst_gap, gap);
          return;
        }
        bool checkable = true;
        if (witness)
          checkable = on_lattice(witness(p, max_side), table.spec.D);
        if (!checkable) {
          ++rep.gaps_excused;
          rep.worst_excused_gap = std::max(rep.worst_excused_gap, gap);
          return;
        }
        rep.worst_gap = std::max(rep.worst_gap, gap);
        ++rep.tightness_violations;
        rep.violations.push_back(
            "tightness " + std::string(name) + " at (V=" +
            to_fraction_string(V) + ", S=" + to_fraction_string(S) +
            "): lattice [" + to_fraction_string(lo) + ", " +
            to_fraction_string(hi) + "] vs theorem " + iv.to_string() +
            ", gap " + to_fraction_string(gap));
      };
      side(Q(lo - iv.lo), false);
      side(Q(iv.hi - hi), true);
    };

    check("PB", providers.pb_fixed(p), e.min_pb, e.max_pb,
          providers.pb_witness);
    if (check_mm)
      check("MM", providers.mm_fixed(p), e.min_mm, e.max_mm,
            providers.mm_witness);
  }
  return rep;
}

bool ZeroScan::mm_pb_masks_identical() const {
  for (const auto& [key, flags] : cells)
    if (flags.first != flags.second) return false;
  return true;
}

ZeroScan zero_achievability_scan(const LatticeSpec& spec,
                                 std::optional<Q> turnout_ratio) {
  check_budget(spec, "zero scan");
  ZeroScan scan;
  scan.spec = spec;
  scan.turnout_ratio = turnout_ratio;
  const int n = spec.n, D = spec.D;

  enumerate_multisets(n, D, 0, D, [&](const std::vector<int>& js, long sum) {
    LatticeMetrics m = lattice_metrics(js, sum, n, D);
    const bool mm_zero = m.mm_num == 0;
    const bool pb_zero = m.above == m.below;
    if (!mm_zero && !pb_zero) return;

    std::vector<int> wins_options;
    if (spec.enumerate_tie_flags) {
      for (int w = 0; w <= m.half_count; ++w)
        wins_options.push_back(m.wins_base + w);
    } else {
      wins_options.push_back(m.wins_base);
    }

    for (int wins : wins_options) {
      auto& flags = scan.cells[{sum, wins}];
      flags.first = flags.first || mm_zero;
      flags.second = flags.second || pb_zero;
    }

    if (!turnout_ratio || !(mm_zero && pb_zero)) return;

    // Two-level weight patterns: high-weight districts are a sub-multiset,
    // so only (#high, share sum of high) matters for the weighted share.
    const Q C = *turnout_ratio;
    std::vector<std::vector<bool>> reachable(
        n + 1, std::vector<bool>(sum + 1, false));
    reachable[0][0] = true;
    for (int j : js)
      for (int c = n - 1; c >= 0; --c)
        for (long s = sum - j; s >= 0; --s)
          if (reachable[c][s]) reachable[c + 1][s + j] = true;

    for (int c = 0; c <= n; ++c) {
      for (long s = 0; s <= sum; ++s) {
        if (!reachable[c][s]) continue;
        Q vstar = (Q(sum - s) + C * Q(s)) /
                  (Q(D) * (Q(n - c) + C * Q(c)));
        for (int wins : wins_options) {
          auto it = scan.vstar_range.find(wins);
          if (it == scan.vstar_range.end()) {
            scan.vstar_range.emplace(wins, std::make_pair(vstar, vstar));
          } else {
            it->second.first = std::min(it->second.first, vstar);
            it->second.second = std::max(it->second.second, vstar);
          }
        }
      }
    }
  });
  return scan;
}

std::function<bool(const Q&, const Q&)> declination_zero_searcher(int n, int D,
                                                                  double tol) {
  // Achievable aggregates: w winners with share sum in [w*D/2, w*D]
  // (1/2 districts can be flagged winners), l losers in [0, l*D/2].
  // Declination depends only on (w, winner mean, loser mean); V and S only
  // on (w, sums). Cache, per (w, sumW, sumL), whether |dec| <= tol.
  struct Hit {
    long sum;  // sumW + sumL
    int w;
  };
  auto hits = std::make_shared<std::map<std::pair<long, int>, bool>>();
  const double pi = std::acos(-1.0);
  for (int w = 1; w < n; ++w) {
    int l = n - w;
    for (long sw = static_cast<long>(w) * D / 2; sw <= static_cast<long>(w) * D;
         ++sw) {
      for (long sl = 0; sl <= static_cast<long>(l) * D / 2; ++sl) {
        double ybar_w = static_cast<double>(sw) / (w * D);
        double ybar_l = static_cast<double>(sl) / (l * D);
        double theta_w = std::atan((ybar_w - 0.5) / (w / (2.0 * n)));
        double theta_l = std::atan((0.5 - ybar_l) / (l / (2.0 * n)));
        double dec = 2.0 / pi * (theta_w - theta_l);
        if (std::abs(dec) <= tol) {
          auto key = std::make_pair(sw + sl, w);
          (*hits)[key] = true;
        }
      }
    }
  }
  long nd = static_cast<long>(n) * D;
  return [hits, n, nd](const Q& V, const Q& S) {
    // Cell matches when (V,S) is exactly representable at (n, D).
    Q sum = V * nd;
    Q wins = S * n;
    if (sum.get_den() != 1 || wins.get_den() != 1) return false;
    auto it = hits->find({sum.get_num().get_si(),
                          static_cast<int>(wins.get_num().get_si())});
    return it != hits->end();
  };
}

}  // namespace psym::oracle
