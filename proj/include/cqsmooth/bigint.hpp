#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace cqs {

// Expression templates off: plain value semantics everywhere.
using BigInt = boost::multiprecision::number<
    boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

/// Thrown when caller-supplied data violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an internal identity that must hold fails to hold.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string to_string(const BigInt& v) { return v.str(); }

inline BigInt gcd(BigInt a, BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    BigInt r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Floor and ceiling division for any signs of the operands (den != 0).
inline BigInt floor_div(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

inline BigInt ceil_div(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  if ((num % den != 0) && ((num < 0) == (den < 0))) ++q;
  return q;
}

inline BigInt mod_positive(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

inline std::int64_t to_int64(const BigInt& v, const char* what) {
  if (v > BigInt(INT64_MAX) || v < BigInt(INT64_MIN))
    throw InvalidInput(std::string(what) + " does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

}  // namespace cqs
