#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <utility>

#include "cotor/errors.hpp"

namespace cotor {

using Int = boost::multiprecision::cpp_int;

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int gcd_int(Int a, Int b) {
  a = abs_int(a);
  b = abs_int(b);
  while (b != 0) {
    Int r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Floor-mod into [0, n).
inline Int mod_floor(const Int& a, const Int& n) {
  Int r = a % n;
  if (r < 0) r += n;
  return r;
}

inline bool is_prime_int(const Int& p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline std::string to_string(const Int& a) { return a.str(); }

enum class RingKind { Integers, IntegersModN, PrimeField };

/// A computable commutative base ring: Z, Z/n or F_p.
///
/// Elements are plain integers kept in normal form: arbitrary integers for Z,
/// residues in [0, n) otherwise. Z/n and F_p share all algorithms, they only
/// differ in how they are named and compared.
class Ring {
 public:
  static Ring integers() { return Ring(RingKind::Integers, 0); }

  static Ring integers_mod(const Int& n) {
    if (n < 2) throw PreconditionFailed("Zmod needs modulus >= 2, got " + to_string(n));
    return Ring(RingKind::IntegersModN, n);
  }

  static Ring prime_field(const Int& p) {
    if (!is_prime_int(p)) throw PreconditionFailed("Fp needs a prime, got " + to_string(p));
    return Ring(RingKind::PrimeField, p);
  }

  RingKind kind() const { return kind_; }
  /// 0 for Z, n for Z/n and F_p.
  const Int& modulus() const { return modulus_; }
  bool is_finite() const { return kind_ != RingKind::Integers; }
  /// Z/n and F_p are self-injective; Z is not.
  bool is_quasi_frobenius() const { return is_finite(); }
  bool is_field() const { return kind_ == RingKind::PrimeField || (is_finite() && is_prime_int(modulus_)); }

  Int normalize(const Int& a) const { return is_finite() ? mod_floor(a, modulus_) : a; }
  Int add(const Int& a, const Int& b) const { return normalize(a + b); }
  Int sub(const Int& a, const Int& b) const { return normalize(a - b); }
  Int mul(const Int& a, const Int& b) const { return normalize(a * b); }
  Int neg(const Int& a) const { return normalize(-a); }

  bool is_unit(const Int& a) const {
    if (!is_finite()) return a == 1 || a == -1;
    return gcd_int(a, modulus_) == 1;
  }

  /// Number of elements; 0 stands for "infinite".
  Int size() const { return modulus_; }

  std::string name() const {
    switch (kind_) {
      case RingKind::Integers: return "Z";
      case RingKind::IntegersModN: return "Zmod " + to_string(modulus_);
      case RingKind::PrimeField: return "Fp " + to_string(modulus_);
    }
    return "?";
  }

  friend bool operator==(const Ring& a, const Ring& b) {
    return a.kind_ == b.kind_ && a.modulus_ == b.modulus_;
  }

 private:
  Ring(RingKind k, Int n) : kind_(k), modulus_(std::move(n)) {}

  RingKind kind_;
  Int modulus_;
};

inline void require_same_ring(const Ring& a, const Ring& b, const char* where) {
  if (!(a == b)) throw PreconditionFailed(std::string(where) + ": rings differ (" + a.name() + " vs " + b.name() + ")");
}

}  // namespace cotor
