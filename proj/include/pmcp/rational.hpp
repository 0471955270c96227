#pragma once

#include <gmp.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace pmcp {

// Arbitrary-precision rational with value semantics, wrapping GMP's mpq_t.
// Always kept canonical (reduced, positive denominator).
class Rat {
public:
  Rat() { mpq_init(v_); }
  Rat(long n) {  // NOLINT: implicit by design, mirrors integer literals
    mpq_init(v_);
    mpq_set_si(v_, n, 1);
  }
  Rat(long num, unsigned long den) {
    mpq_init(v_);
    mpq_set_si(v_, num, den);
    mpq_canonicalize(v_);
  }
  Rat(const Rat& o) {
    mpq_init(v_);
    mpq_set(v_, o.v_);
  }
  Rat(Rat&& o) noexcept {
    mpq_init(v_);
    mpq_swap(v_, o.v_);
  }
  Rat& operator=(const Rat& o) {
    if (this != &o) mpq_set(v_, o.v_);
    return *this;
  }
  Rat& operator=(Rat&& o) noexcept {
    mpq_swap(v_, o.v_);
    return *this;
  }
  ~Rat() { mpq_clear(v_); }

  // Parses "n" or "n/d"; returns false on malformed input.
  static bool parse(std::string_view s, Rat& out);

  int sgn() const { return mpq_sgn(v_); }
  bool is_zero() const { return mpq_sgn(v_) == 0; }
  bool is_integer() const { return mpz_cmp_ui(mpq_denref(v_), 1) == 0; }

  Rat num() const;  // numerator as integral rational
  Rat den() const;  // denominator as integral rational (always > 0)

  // Value as long; only valid when is_integer() and the value fits.
  long to_long() const { return mpz_get_si(mpq_numref(v_)); }

  std::string str() const;

  friend Rat operator+(const Rat& a, const Rat& b) {
    Rat r;
    mpq_add(r.v_, a.v_, b.v_);
    return r;
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    Rat r;
    mpq_sub(r.v_, a.v_, b.v_);
    return r;
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    Rat r;
    mpq_mul(r.v_, a.v_, b.v_);
    return r;
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    Rat r;
    mpq_div(r.v_, a.v_, b.v_);
    return r;
  }
  Rat operator-() const {
    Rat r;
    mpq_neg(r.v_, v_);
    return r;
  }
  Rat& operator+=(const Rat& o) {
    mpq_add(v_, v_, o.v_);
    return *this;
  }
  Rat& operator-=(const Rat& o) {
    mpq_sub(v_, v_, o.v_);
    return *this;
  }
  Rat& operator*=(const Rat& o) {
    mpq_mul(v_, v_, o.v_);
    return *this;
  }
  Rat& operator/=(const Rat& o) {
    mpq_div(v_, v_, o.v_);
    return *this;
  }

  friend bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.v_, b.v_) != 0; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return mpq_cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Rat& a, const Rat& b) { return mpq_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const Rat& a, const Rat& b) { return mpq_cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const Rat& a, const Rat& b) { return mpq_cmp(a.v_, b.v_) >= 0; }

  // lcm of the denominators of a and b (an integral Rat >= 1).
  static Rat lcm_den(const Rat& a, const Rat& b);
  // min/max by value
  static const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
  static const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

private:
  mpq_t v_;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace pmcp
