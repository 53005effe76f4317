#include "starlift/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace starlift {

namespace {

bool is_integer_token(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Rat parse_rational(std::string_view text) {
  const std::string original(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den))
      throw std::invalid_argument("malformed rational: " + original);
    Int n{std::string(num)};
    Int d{std::string(den)};
    if (d == 0) throw std::invalid_argument("zero denominator: " + original);
    return Rat(n, d);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!is_integer_token(whole) || frac.empty() || !is_integer_token(frac) ||
        frac.front() == '-' || frac.front() == '+')
      throw std::invalid_argument("malformed decimal: " + original);
    bool negative = whole.front() == '-';
    Int scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Int n = Int{std::string(whole)} * scale;
    Int f{std::string(frac)};
    n += negative ? -f : f;
    return Rat(n, scale);
  }
  if (!is_integer_token(text))
    throw std::invalid_argument("malformed rational: " + original);
  return Rat(Int{original});
}

std::string format_rational(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rat& r) { return r.convert_to<double>(); }

Rat pow_rational(const Rat& base, unsigned exp) {
  Rat result = 1;
  Rat b = base;
  while (exp > 0) {
    if (exp & 1u) result *= b;
    b *= b;
    exp >>= 1u;
  }
  return result;
}

Int ceil_to_int(const Rat& r) {
  Int n = numerator(r);
  Int d = denominator(r);
  Int q = n / d;
  if (q * d != n && n > 0) ++q;
  return q;
}

Rat rational_upper_bound(double x, int significant_digits) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite bound");
  if (x <= 0) throw std::invalid_argument("bound must be positive");
  const Rat exact(x);  // binary-exact conversion
  const int e = static_cast<int>(std::floor(std::log10(x)));
  const int shift = significant_digits - 1 - e;
  Rat scale = 1;
  if (shift >= 0)
    scale = Rat(pow_rational(Rat(10), static_cast<unsigned>(shift)));
  else
    scale = Rat(1) / pow_rational(Rat(10), static_cast<unsigned>(-shift));
  // +1 keeps the result strictly above x, absorbing the final-ulp error of
  // the float computation that produced it.
  Int n = ceil_to_int(exact * scale) + 1;
  return Rat(n) / scale;
}

}  // namespace starlift
