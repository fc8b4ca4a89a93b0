#include "qsrsr/rational.hpp"

#include <cctype>

namespace qsrsr {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view original) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ParseError("invalid rational: '" + std::string(original) + "'");
  mpz_class v(std::string(s), 10);
  return negative ? mpz_class(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(s.substr(0, slash), text);
    std::string_view den_part = s.substr(slash + 1);
    if (den_part.empty() || den_part.front() == '+' || den_part.front() == '-')
      throw ParseError("invalid rational: '" + std::string(text) + "'");
    mpz_class den = parse_integer(den_part, text);
    if (den == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  bool negative = false;
  std::string_view body = s;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  std::string_view int_part = body;
  std::string_view frac_part;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    int_part = body.substr(0, dot);
    frac_part = body.substr(dot + 1);
    if (frac_part.find('.') != std::string_view::npos)
      throw ParseError("invalid rational: '" + std::string(text) + "'");
  }
  if (int_part.empty() && frac_part.empty())
    throw ParseError("invalid rational: '" + std::string(text) + "'");
  if (!int_part.empty() && !all_digits(int_part))
    throw ParseError("invalid rational: '" + std::string(text) + "'");
  if (!frac_part.empty() && !all_digits(frac_part))
    throw ParseError("invalid rational: '" + std::string(text) + "'");

  mpz_class num = int_part.empty() ? mpz_class(0) : mpz_class(std::string(int_part), 10);
  mpz_class den = 1;
  if (!frac_part.empty()) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
    num = num * scale + mpz_class(std::string(frac_part), 10);
    den = scale;
  }
  Rational r(negative ? mpz_class(-num) : num, den);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

}  // namespace qsrsr
