#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

#include "lak/errors.hpp"

namespace lak {

using BigInt = boost::multiprecision::cpp_int;

// One element of K~ = K u {blank}. Rationals are kept in lowest terms with a
// positive denominator; the blank compares equal only to itself.
class KElement {
 public:
  KElement() : blank_(true), num_(0), den_(1) {}

  static KElement blank() { return KElement(); }

  static KElement rational(BigInt num, BigInt den) {
    if (den == 0) throw Error("rational with zero denominator");
    KElement e;
    e.blank_ = false;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    BigInt g = boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    e.num_ = std::move(num);
    e.den_ = std::move(den);
    return e;
  }

  static KElement integer(long v) { return rational(BigInt(v), BigInt(1)); }

  bool is_blank() const { return blank_; }
  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool operator==(const KElement& o) const {
    if (blank_ || o.blank_) return blank_ && o.blank_;
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const KElement& o) const { return !(*this == o); }

  // Total order on non-blank elements; throws on blanks.
  bool leq(const KElement& o) const {
    if (blank_ || o.blank_) throw BlankArgumentError("leq on blank");
    return num_ * o.den_ <= o.num_ * den_;
  }

  KElement add(const KElement& o) const {
    require_value(o, "+");
    return rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  KElement sub(const KElement& o) const {
    require_value(o, "-");
    return rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  KElement mul(const KElement& o) const {
    require_value(o, "*");
    return rational(num_ * o.num_, den_ * o.den_);
  }

  std::string to_string() const {
    if (blank_) return "_";
    std::string s = num_.str();
    if (den_ != 1) s += "/" + den_.str();
    return s;
  }

  // Accepts "a", "-a", "a/b", "-a/b" and "_" for the blank.
  static KElement parse(std::string_view text);

 private:
  void require_value(const KElement& o, const char* op) const {
    if (blank_ || o.blank_)
      throw BlankArgumentError(std::string("arithmetic '") + op + "' on blank");
  }

  bool blank_;
  BigInt num_;
  BigInt den_;
};

}  // namespace lak
