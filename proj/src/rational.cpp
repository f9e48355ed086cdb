#include "circval/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace circval {

Rat rat_floor(const Rat& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rat(q);
}

Rat mod1(const Rat& r) { return r - rat_floor(r); }

std::string rat_str(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace {

bool valid_integer(std::string_view s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rat parse_rat(std::string_view text) {
  const std::string s(text);
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (!valid_integer(num) || !valid_integer(den))
      throw std::invalid_argument("malformed rational: " + s);
    Rat r;
    if (mpq_set_str(r.get_mpq_t(), (num + "/" + den).c_str(), 10) != 0)
      throw std::invalid_argument("malformed rational: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    const std::string whole = s.substr(0, dot);
    const std::string frac = s.substr(dot + 1);
    if (frac.empty() || !valid_integer(frac) || frac[0] == '-' || frac[0] == '+')
      throw std::invalid_argument("malformed decimal: " + s);
    const bool negative = !whole.empty() && whole[0] == '-';
    const std::string whole_digits =
        (whole.empty() || whole == "-" || whole == "+") ? "0" : whole;
    if (!valid_integer(whole_digits))
      throw std::invalid_argument("malformed decimal: " + s);
    Rat whole_part{mpz_class(whole_digits)};
    Rat tail{mpz_class(frac)};
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    tail /= Rat(scale);
    whole_part += negative ? Rat(-tail) : tail;
    whole_part.canonicalize();
    return whole_part;
  }
  if (!valid_integer(s)) throw std::invalid_argument("malformed rational: " + s);
  return Rat{mpz_class(s)};
}

}  // namespace circval
