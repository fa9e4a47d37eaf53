#pragma once

#include <cstddef>
#include <vector>

#include "qb/number.hpp"

namespace qb {

inline bool is_zero(const Rational& x) { return x == 0; }
inline Rational lift_constant(const Rational&, const Rational& c) { return c; }

/// Dense univariate polynomial, coefficients from low to high degree.
template <class K>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<K> coeffs) : c_(std::move(coeffs)) {}

  std::size_t size() const { return c_.size(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const K& operator[](std::size_t i) const { return c_[i]; }
  K& operator[](std::size_t i) { return c_[i]; }
  const std::vector<K>& coefficients() const { return c_; }

  K operator()(const K& t) const {
    K acc = c_.back();
    for (std::size_t i = c_.size() - 1; i-- > 0;) acc = K(acc * t) + c_[i];
    return acc;
  }

  Polynomial derivative() const {
    std::vector<K> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(K(c_[i] * lift_constant(c_[i], Rational(static_cast<long>(i)))));
    if (d.empty()) d.push_back(K(c_[0] - c_[0]));
    return Polynomial(std::move(d));
  }

  Polynomial reversed() const {
    std::vector<K> r(c_.rbegin(), c_.rend());
    return Polynomial(std::move(r));
  }

  friend Polynomial operator+(const Polynomial& f, const Polynomial& g) {
    const Polynomial& big = f.size() >= g.size() ? f : g;
    const Polynomial& small = f.size() >= g.size() ? g : f;
    std::vector<K> out = big.c_;
    for (std::size_t i = 0; i < small.size(); ++i) out[i] = K(out[i] + small.c_[i]);
    return Polynomial(std::move(out));
  }

  friend Polynomial operator-(const Polynomial& f) {
    std::vector<K> out;
    for (const K& c : f.c_) out.push_back(K(-c));
    return Polynomial(std::move(out));
  }

  friend Polynomial operator-(const Polynomial& f, const Polynomial& g) { return f + (-g); }

  friend Polynomial operator*(const Polynomial& f, const Polynomial& g) {
    K zero = K(f.c_[0] - f.c_[0]);
    std::vector<K> out(f.size() + g.size() - 1, zero);
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) out[i + j] = K(out[i + j] + K(f.c_[i] * g.c_[j]));
    return Polynomial(std::move(out));
  }

  friend Polynomial operator*(const Polynomial& f, const K& s) {
    std::vector<K> out;
    for (const K& c : f.c_) out.push_back(K(c * s));
    return Polynomial(std::move(out));
  }

  /// Drops leading coefficients that are exactly zero.
  Polynomial trimmed() const {
    std::vector<K> out = c_;
    while (out.size() > 1 && is_exact_zero_coeff(out.back())) out.pop_back();
    return Polynomial(std::move(out));
  }

 private:
  static bool is_exact_zero_coeff(const Rational& x) { return x == 0; }
  template <class T>
  static bool is_exact_zero_coeff(const T& x) { return x.is_exact_zero(); }

  std::vector<K> c_;
};

}  // namespace qb
