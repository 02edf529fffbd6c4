#include "psym/metrics.hpp"

#include <mpfr.h>

#include <algorithm>
#include <sstream>

namespace psym {

namespace {
const Q kHalf = make_q(1, 2);
}

Q mean_median(const Election& e) { return e.median() - e.unweighted_mean(); }

Q partisan_bias(const Election& e) {
  const Q mean = e.unweighted_mean();
  long above = 0, below = 0;
  for (const auto& d : e.districts()) {
    if (d.share > mean)
      ++above;
    else if (d.share < mean)
      ++below;
  }
  return Q(make_q(above - below, 2 * e.n()));
}

SeatsVotesCurve seats_votes_curve(const Election& e) {
  if (!e.equal_turnout())
    throw DomainError(
        "seats-votes curve requires equal turnout (statewide share must be "
        "the mean of district shares)");
  SeatsVotesCurve c;
  c.n_ = e.n();
  c.base_share_ = e.statewide_vote_share();
  // District i flips when its swung share passes 1/2, i.e. at
  // v' = base + (1/2 - share_i). Descending shares give ascending flips.
  for (int i = e.n() - 1; i >= 0; --i) {
    const auto& d = e.district(i);
    c.flips_.push_back(c.base_share_ + (kHalf - d.share));
    c.flip_wins_tie_.push_back(d.winner_at_half.value_or(false));
  }
  return c;
}

Q SeatsVotesCurve::seat_share_at(const Q& vprime) const {
  long won = 0;
  for (std::size_t i = 0; i < flips_.size(); ++i) {
    if (flips_[i] < vprime || (flips_[i] == vprime && flip_wins_tie_[i]))
      ++won;
  }
  return make_q(won, n_);
}

Q SeatsVotesCurve::midpoint_at(const Q& vprime) const {
  long before2 = 0;  // twice the count, so ties add 1
  for (const Q& f : flips_) {
    if (f < vprime)
      before2 += 2;
    else if (f == vprime)
      before2 += 1;
  }
  return Q(make_q(before2, 2 * n_));
}

std::pair<Q, Q> SeatsVotesCurve::half_seat_crossing() const {
  // After j flips the seat count is j. S reaches 1/2 at ceil(n/2) flips;
  // S exceeds 1/2 after floor(n/2)+1 flips.
  const int need = (n_ + 1) / 2;
  Q lo = flips_[need - 1];
  Q hi = flips_[n_ / 2];  // index floor(n/2): the (floor(n/2)+1)-th flip
  return {lo, hi};
}

std::string SeatsVotesCurve::to_csv() const {
  std::ostringstream out;
  out << "v,s\n";
  long before = 0;  // flips at or below the left edge are already counted
  std::size_t i = 0;
  while (i < flips_.size() && flips_[i] <= 0) {
    ++before;
    ++i;
  }
  out << "0," << to_fraction_string(make_q(before, n_)) << "\n";
  while (i < flips_.size() && flips_[i] <= 1) {
    const Q& f = flips_[i];
    long at = 0;
    while (i < flips_.size() && flips_[i] == f) {
      ++at;
      ++i;
    }
    out << to_fraction_string(f) << "," << to_fraction_string(make_q(before, n_))
        << "\n";
    before += at;
    out << to_fraction_string(f) << "," << to_fraction_string(make_q(before, n_))
        << "\n";
  }
  out << "1," << to_fraction_string(make_q(before, n_)) << "\n";
  return out.str();
}

Q mm_from_curve(const SeatsVotesCurve& c) {
  auto [lo, hi] = c.half_seat_crossing();
  return kHalf - (lo + hi) / 2;
}

Q pb_from_curve(const SeatsVotesCurve& c) {
  return c.midpoint_at(kHalf) - kHalf;
}

Q efficiency_gap(const Election& e) {
  if (!e.equal_turnout())
    throw DomainError("efficiency gap requires equal turnout");
  SVPair p = e.seat_share();
  return p.S - 2 * p.V + kHalf;
}

namespace {

// q as an mpfr value at the working precision.
void mpfr_from_q(mpfr_t out, const Q& q) {
  mpfr_set_q(out, q.get_mpq_t(), MPFR_RNDN);
}

Q q_from_mpfr(const mpfr_t x) {
  mpz_class mant;
  mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), x);
  Q q(mant);
  if (e >= 0) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(e));
    q *= Q(scale);
  } else {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(-e));
    q /= Q(scale);
  }
  return q;
}

}  // namespace

MetricValue declination(const Election& e, int digits) {
  const int n = e.n();
  int wins = e.seats_won();
  int losses = n - wins;
  if (wins == 0 || losses == 0) return {Q(0), false};

  Q win_sum = 0, loss_sum = 0;
  for (int i = 0; i < n; ++i) {
    if (e.wins(i))
      win_sum += e.district(i).share;
    else
      loss_sum += e.district(i).share;
  }
  Q ybar_w = win_sum / wins;
  Q ybar_l = loss_sum / losses;
  Q arg_w = (ybar_w - kHalf) / make_q(wins, 2 * n);
  Q arg_l = (kHalf - ybar_l) / make_q(losses, 2 * n);

  // digits decimal digits ~ digits * log2(10) bits, plus guard bits.
  const mpfr_prec_t prec =
      static_cast<mpfr_prec_t>(digits * 3.3219280948873623) + 64;
  mpfr_t aw, al, pi, acc;
  mpfr_inits2(prec, aw, al, pi, acc, static_cast<mpfr_ptr>(nullptr));
  mpfr_from_q(aw, arg_w);
  mpfr_from_q(al, arg_l);
  mpfr_atan(aw, aw, MPFR_RNDN);
  mpfr_atan(al, al, MPFR_RNDN);
  mpfr_const_pi(pi, MPFR_RNDN);
  mpfr_sub(acc, aw, al, MPFR_RNDN);
  mpfr_mul_ui(acc, acc, 2, MPFR_RNDN);
  mpfr_div(acc, acc, pi, MPFR_RNDN);
  Q value = q_from_mpfr(acc);
  mpfr_clears(aw, al, pi, acc, static_cast<mpfr_ptr>(nullptr));
  return {value, true};
}

bool sign_consistency(const Election& e) {
  const Q mm = mean_median(e);
  const Q pb = partisan_bias(e);
  if (mm > 0 && pb < 0) return false;
  if (mm < 0 && pb > 0) return false;
  if (mm == 0 && pb != 0) return false;
  return true;
}

}  // namespace psym
