#include "ava/rational.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace ava {

namespace {

using Integer = boost::multiprecision::mpz_int;

Integer pow10(long exponent) {
  Integer result = 1;
  for (long k = 0; k < exponent; ++k) result *= 10;
  return result;
}

Rational parse_decimal(std::string_view text) {
  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    std::string_view exp_text = text.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc() || ptr != exp_text.data() + exp_text.size()) {
      throw std::invalid_argument("bad exponent in number: " + std::string(text));
    }
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long fraction_digits = 0;
  bool seen_point = false;
  for (char ch : mantissa) {
    if (ch == '.') {
      if (seen_point) throw std::invalid_argument("bad number: " + std::string(text));
      seen_point = true;
    } else if (ch >= '0' && ch <= '9') {
      digits.push_back(ch);
      if (seen_point) ++fraction_digits;
    } else {
      throw std::invalid_argument("bad number: " + std::string(text));
    }
  }
  if (digits.empty()) throw std::invalid_argument("bad number: " + std::string(text));
  // A leading zero would make GMP read the digits as octal.
  const auto first = digits.find_first_not_of('0');
  digits = first == std::string::npos ? "0" : digits.substr(first);
  Integer numerator(digits);
  if (negative) numerator = -numerator;
  long scale = exponent - fraction_digits;
  if (scale >= 0) return Rational(numerator * pow10(scale));
  return Rational(numerator, pow10(-scale));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_decimal(text.substr(0, slash));
    Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    return num / den;
  }
  return parse_decimal(text);
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite number");
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::invalid_argument("cannot format number");
  return parse_decimal(std::string_view(buffer, static_cast<std::size_t>(ptr - buffer)));
}

bool has_terminating_decimal(const Rational& r) {
  Integer den = denominator(r);
  while (den % 2 == 0) den /= 2;
  while (den % 5 == 0) den /= 5;
  return den == 1;
}

std::string to_string(const Rational& r) {
  if (!has_terminating_decimal(r)) return r.str();
  Integer num = numerator(r);
  Integer den = denominator(r);
  if (den == 1) return num.str();
  bool negative = num < 0;
  if (negative) num = -num;
  // Scale to a power of ten denominator.
  long places = 0;
  Integer scaled_den = 1;
  while (scaled_den % den != 0) {
    scaled_den *= 10;
    ++places;
  }
  Integer scaled_num = num * (scaled_den / den);
  std::string digits = scaled_num.str();
  if (static_cast<long>(digits.size()) <= places) {
    digits.insert(0, static_cast<std::size_t>(places - static_cast<long>(digits.size()) + 1), '0');
  }
  digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  return negative ? "-" + digits : digits;
}

Rational ceil_rational(const Rational& r) {
  Integer num = numerator(r);
  Integer den = denominator(r);
  Integer q = num / den;  // truncates toward zero
  if (q * den < num) q += 1;
  return Rational(q);
}

}  // namespace ava
