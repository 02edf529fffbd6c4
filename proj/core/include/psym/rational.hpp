#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace psym {

// All election data and metric values are exact rationals. Floating point
// appears only in SVG layout and in the Declination approximation.
using Q = mpq_class;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input outside an operation's mathematical domain (infeasible pair,
// theorem precondition violated, target outside a region).
struct DomainError : Error {
  using Error::Error;
};

// Malformed data (bad JSON, invariant violation in a file).
struct ParseError : Error {
  using Error::Error;
};

// Enumeration would exceed the configured budget. Carries the estimate so
// callers can report what would be required.
struct BudgetError : Error {
  BudgetError(const std::string& what, double required)
      : Error(what), required_evaluations(required) {}
  double required_evaluations;
};

inline Q make_q(long num, long den = 1) {
  Q q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p/q", decimal strings like "0.37" or "-1.5", and plain integers.
// Exact: "0.37" becomes 37/100.
Q parse_rational(const std::string& text);

// "p/q" (or "p" when the denominator is 1).
std::string to_fraction_string(const Q& q);

// Fixed-point decimal approximation, default 6 places, round-half-away.
std::string to_decimal_string(const Q& q, int places = 6);

// "p/q (0.dddddd)" — the CLI's standard way of printing a metric value.
std::string to_display_string(const Q& q);

// Smallest integer >= q and largest integer <= q, as exact integers in Q.
Q q_ceil(const Q& q);
Q q_floor(const Q& q);

inline double to_double(const Q& q) { return q.get_d(); }

}  // namespace psym
