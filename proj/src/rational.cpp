#include "pmcp/rational.hpp"

#include <cctype>
#include <ostream>

namespace pmcp {

bool Rat::parse(std::string_view s, Rat& out) {
  if (s.empty()) return false;
  // mpq_set_str accepts leading whitespace and empty parts loosely; validate shape first.
  size_t slash = s.find('/');
  auto is_int = [](std::string_view t) {
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
    if (t.empty()) return false;
    for (char c : t)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  if (slash == std::string_view::npos) {
    if (!is_int(s)) return false;
  } else {
    std::string_view n = s.substr(0, slash), d = s.substr(slash + 1);
    if (!is_int(n) || !is_int(d) || (!d.empty() && d[0] == '-')) return false;
  }
  std::string buf(s);
  Rat r;
  if (mpq_set_str(r.v_, buf.c_str(), 10) != 0) return false;
  if (mpz_sgn(mpq_denref(r.v_)) == 0) return false;
  mpq_canonicalize(r.v_);
  out = std::move(r);
  return true;
}

Rat Rat::num() const {
  Rat r;
  mpq_set_z(r.v_, mpq_numref(v_));
  return r;
}

Rat Rat::den() const {
  Rat r;
  mpq_set_z(r.v_, mpq_denref(v_));
  return r;
}

std::string Rat::str() const {
  char* s = mpq_get_str(nullptr, 10, v_);
  std::string out(s);
  void (*freefn)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefn);
  freefn(s, out.size() + 1);
  return out;
}

Rat Rat::lcm_den(const Rat& a, const Rat& b) {
  Rat r;
  mpz_lcm(mpq_numref(r.v_), mpq_denref(a.v_), mpq_denref(b.v_));
  return r;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace pmcp
