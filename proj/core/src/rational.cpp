#include "psym/rational.hpp"

#include <cctype>

namespace psym {

namespace {

bool is_plain_integer(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Q parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ParseError("empty rational literal");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!is_plain_integer(num) || !is_plain_integer(den))
      throw ParseError("bad rational literal: '" + text + "'");
    Q q;
    if (mpq_set_str(q.get_mpq_t(), (num + "/" + den).c_str(), 10) != 0)
      throw ParseError("bad rational literal: '" + text + "'");
    if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
      throw ParseError("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
  }

  auto dot = s.find('.');
  if (dot == std::string::npos) {
    if (!is_plain_integer(s))
      throw ParseError("bad rational literal: '" + text + "'");
    Q q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
      throw ParseError("bad rational literal: '" + text + "'");
    q.canonicalize();
    return q;
  }

  // Decimal string: sign, integer part, fractional part.
  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  std::string ip = s.substr(i, dot - i);
  std::string fp = s.substr(dot + 1);
  if (ip.empty() && fp.empty())
    throw ParseError("bad rational literal: '" + text + "'");
  if ((!ip.empty() && !is_plain_integer(ip)) ||
      (!fp.empty() && !is_plain_integer(fp)))
    throw ParseError("bad rational literal: '" + text + "'");

  mpz_class digits((ip + fp).empty() ? "0" : ip + fp);
  mpz_class den = 1;
  for (std::size_t k = 0; k < fp.size(); ++k) den *= 10;
  Q q(digits, den);
  q.canonicalize();
  return neg ? Q(-q) : q;
}

std::string to_fraction_string(const Q& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_decimal_string(const Q& q, int places) {
  mpz_class scale = 1;
  for (int k = 0; k < places; ++k) scale *= 10;
  mpz_class num = q.get_num() * scale * 2;
  mpz_class den = q.get_den();
  mpz_class twice = num / den;  // truncates toward zero
  // round half away from zero
  mpz_class rounded =
      (twice >= 0) ? mpz_class((twice + 1) / 2) : mpz_class((twice - 1) / 2);
  bool neg = rounded < 0;
  mpz_class mag = neg ? mpz_class(-rounded) : rounded;
  std::string digits = mag.get_str();
  if (static_cast<int>(digits.size()) <= places)
    digits = std::string(places + 1 - digits.size(), '0') + digits;
  std::string out = digits.substr(0, digits.size() - places);
  if (places > 0) out += "." + digits.substr(digits.size() - places);
  return (neg ? "-" : "") + out;
}

std::string to_display_string(const Q& q) {
  return to_fraction_string(q) + " (" + to_decimal_string(q) + ")";
}

Q q_ceil(const Q& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return Q(r);
}

Q q_floor(const Q& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return Q(r);
}

}  // namespace psym
