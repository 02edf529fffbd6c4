#include "psym/election.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace psym {

namespace {
const Q kHalf = make_q(1, 2);
}

SVPair SVPair::make(Q V, Q S, int n) {
  if (n < 1) throw DomainError("district count must be positive");
  Q seats = S * n;
  if (seats.get_den() != 1)
    throw DomainError("seat share " + to_fraction_string(S) +
                      " is not expressible with denominator " +
                      std::to_string(n));
  long won = seats.get_num().get_si();
  if (won < 0 || won > n)
    throw DomainError("seat share outside [0,1]");
  SVPair p;
  p.V = std::move(V);
  p.S = std::move(S);
  p.n = n;
  p.losses = n - static_cast<int>(won);
  return p;
}

Election Election::create(std::vector<DistrictResult> districts,
                          std::optional<std::vector<Q>> weights) {
  if (districts.empty()) throw ParseError("election needs at least one district");
  for (const auto& d : districts) {
    if (d.share < 0 || d.share > 1)
      throw ParseError("district share " + to_fraction_string(d.share) +
                       " outside [0,1]");
    if (d.share == kHalf && !d.winner_at_half.has_value())
      throw ParseError("district at exactly 1/2 needs a tie-winner flag");
    if (d.share != kHalf && d.winner_at_half.has_value())
      throw ParseError("tie-winner flag on a district not at 1/2");
  }

  Election e;
  const std::size_t n = districts.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (districts[a].share != districts[b].share)
                       return districts[a].share < districts[b].share;
                     // losers before winners at equal shares
                     bool wa = districts[a].winner_at_half.value_or(
                         districts[a].share > kHalf);
                     bool wb = districts[b].winner_at_half.value_or(
                         districts[b].share > kHalf);
                     return !wa && wb;
                   });

  e.districts_.reserve(n);
  for (std::size_t i : order) e.districts_.push_back(std::move(districts[i]));

  if (weights.has_value()) {
    if (weights->size() != n)
      throw ParseError("weights length differs from district count");
    Q total = 0;
    for (const Q& w : *weights) {
      if (w <= 0) throw ParseError("turnout weights must be positive");
      total += w;
    }
    if (total != 1) throw ParseError("turnout weights must sum to 1 exactly");
    e.weights_.reserve(n);
    for (std::size_t i : order) e.weights_.push_back((*weights)[i]);
  }
  return e;
}

Election Election::from_shares(const std::vector<Q>& shares) {
  std::vector<DistrictResult> ds;
  ds.reserve(shares.size());
  for (const Q& s : shares) {
    if (s == kHalf)
      throw ParseError("from_shares cannot infer a tie winner at 1/2");
    ds.emplace_back(s);
  }
  return create(std::move(ds));
}

Q Election::weight(int i) const {
  if (weights_.empty()) return make_q(1, n());
  return weights_[i];
}

bool Election::wins(int i) const {
  const auto& d = districts_[i];
  if (d.share == kHalf) return *d.winner_at_half;
  return d.share > kHalf;
}

int Election::seats_won() const {
  int w = 0;
  for (int i = 0; i < n(); ++i)
    if (wins(i)) ++w;
  return w;
}

Q Election::statewide_vote_share() const {
  Q v = 0;
  for (int i = 0; i < n(); ++i) v += weight(i) * districts_[i].share;
  return v;
}

Q Election::unweighted_mean() const {
  Q sum = 0;
  for (const auto& d : districts_) sum += d.share;
  return sum / n();
}

Q Election::median() const {
  const int m = n();
  if (m % 2 == 1) return districts_[m / 2].share;
  return (districts_[m / 2 - 1].share + districts_[m / 2].share) / 2;
}

SVPair Election::seat_share() const {
  return SVPair::make(statewide_vote_share(), make_q(seats_won(), n()), n());
}

Election Election::party_swap() const {
  std::vector<DistrictResult> ds;
  ds.reserve(districts_.size());
  std::optional<std::vector<Q>> ws;
  if (!weights_.empty()) ws.emplace();
  for (int i = 0; i < n(); ++i) {
    const auto& d = districts_[i];
    DistrictResult r(Q(1 - d.share));
    if (d.winner_at_half.has_value()) r.winner_at_half = !*d.winner_at_half;
    ds.push_back(std::move(r));
    if (ws) ws->push_back(weights_[i]);
  }
  return create(std::move(ds), std::move(ws));
}

std::string Election::to_json() const {
  nlohmann::json j;
  j["shares"] = nlohmann::json::array();
  j["winners_at_half"] = nlohmann::json::array();
  for (int i = 0; i < n(); ++i) {
    j["shares"].push_back(to_fraction_string(districts_[i].share));
    if (districts_[i].winner_at_half.value_or(false))
      j["winners_at_half"].push_back(i);
  }
  if (weights_.empty()) {
    j["weights"] = nullptr;
  } else {
    j["weights"] = nlohmann::json::array();
    for (const Q& w : weights_) j["weights"].push_back(to_fraction_string(w));
  }
  return j.dump(2);
}

Election Election::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad election JSON: ") + e.what());
  }
  if (!j.contains("shares") || !j["shares"].is_array())
    throw ParseError("election JSON: missing 'shares' array");

  std::vector<DistrictResult> ds;
  for (std::size_t i = 0; i < j["shares"].size(); ++i) {
    const auto& s = j["shares"][i];
    if (!s.is_string())
      throw ParseError("election JSON: shares[" + std::to_string(i) +
                       "] must be a rational string");
    try {
      ds.emplace_back(parse_rational(s.get<std::string>()));
    } catch (const ParseError& e) {
      throw ParseError("election JSON: shares[" + std::to_string(i) + "]: " +
                       e.what());
    }
  }

  if (j.contains("winners_at_half") && !j["winners_at_half"].is_null()) {
    if (!j["winners_at_half"].is_array())
      throw ParseError("election JSON: 'winners_at_half' must be an array");
    std::vector<bool> flagged(ds.size(), false);
    for (const auto& idx : j["winners_at_half"]) {
      if (!idx.is_number_integer())
        throw ParseError("election JSON: winners_at_half entries are indices");
      long k = idx.get<long>();
      if (k < 0 || k >= static_cast<long>(ds.size()))
        throw ParseError("election JSON: winners_at_half index " +
                         std::to_string(k) + " out of range");
      flagged[k] = true;
    }
    const Q half = make_q(1, 2);
    for (std::size_t i = 0; i < ds.size(); ++i)
      if (ds[i].share == half) ds[i].winner_at_half = flagged[i];
  } else {
    const Q half = make_q(1, 2);
    for (auto& d : ds)
      if (d.share == half) d.winner_at_half = false;
  }

  std::optional<std::vector<Q>> ws;
  if (j.contains("weights") && !j["weights"].is_null()) {
    if (!j["weights"].is_array())
      throw ParseError("election JSON: 'weights' must be an array or null");
    ws.emplace();
    for (std::size_t i = 0; i < j["weights"].size(); ++i) {
      const auto& w = j["weights"][i];
      if (!w.is_string())
        throw ParseError("election JSON: weights[" + std::to_string(i) +
                         "] must be a rational string");
      try {
        ws->push_back(parse_rational(w.get<std::string>()));
      } catch (const ParseError& e) {
        throw ParseError("election JSON: weights[" + std::to_string(i) +
                         "]: " + e.what());
      }
    }
  }
  return create(std::move(ds), std::move(ws));
}

bool feasibility_check(const Q& V, const Q& S, bool equal_turnout) {
  if (V < 0 || V > 1 || S < 0 || S > 1) return false;
  if (equal_turnout) return S <= 2 * V && S >= 2 * V - 1;
  if (S == 1) return V >= make_q(1, 2);
  if (S == 0) return V <= make_q(1, 2);
  return V > 0 && V < 1;
}

}  // namespace psym
