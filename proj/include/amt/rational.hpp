#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace amt {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/** Error thrown for invalid inputs (malformed files, broken invariants). */
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/** Parses "p/q" or "p" (optional sign, q > 0 after normalization). */
inline Rat parse_rat(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(text));
    Int num(text.substr(0, slash));
    Int den(text.substr(slash + 1));
    if (den == 0) throw ValidationError("rational with zero denominator: " + text);
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw ValidationError("malformed rational: " + text);
  }
}

/** Formats reduced; integers without the "/1" suffix. */
inline std::string rat_to_string(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace amt
