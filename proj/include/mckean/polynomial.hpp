#ifndef MCKEAN_POLYNOMIAL_HPP
#define MCKEAN_POLYNOMIAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mckean/error.hpp"

namespace mckean {

/// Dense univariate polynomial p(x) = sum_i c_i x^i, coefficients stored low to high.
///
/// Trailing zero coefficients are trimmed on construction so that degree() and
/// leading() are always meaningful; the zero polynomial holds a single 0.
template <typename Scalar>
class Polynomial {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Polynomial() : c_(Coeffs::Zero(1)) {}
  Polynomial(std::initializer_list<Scalar> coeffs) : c_(static_cast<Eigen::Index>(coeffs.size())) {
    Eigen::Index i = 0;
    for (Scalar v : coeffs) c_(i++) = v;
    trim();
  }
  explicit Polynomial(Coeffs coeffs) : c_(std::move(coeffs)) { trim(); }
  explicit Polynomial(const std::vector<Scalar>& coeffs)
      : c_(Eigen::Map<const Coeffs>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()))) {
    trim();
  }

  static Polynomial constant(Scalar v) { return Polynomial({v}); }
  static Polynomial monomial(int k, Scalar v = Scalar(1)) {
    Coeffs c = Coeffs::Zero(k + 1);
    c(k) = v;
    return Polynomial(std::move(c));
  }

  const Coeffs& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Scalar leading() const { return c_(c_.size() - 1); }
  Scalar operator[](int i) const { return i <= degree() && i >= 0 ? c_(i) : Scalar(0); }
  bool is_zero() const { return c_.size() == 1 && c_(0) == Scalar(0); }

  Scalar operator()(Scalar x) const {
    Scalar h = c_(c_.size() - 1);
    for (Eigen::Index i = c_.size() - 2; i >= 0; --i) h = h * x + c_(i);
    return h;
  }

  /// Exact k-th derivative.
  Polynomial derivative(int k = 1) const {
    if (k <= 0) return *this;
    if (k > degree()) return Polynomial();
    Coeffs d(c_.size() - k);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      Scalar f(1);
      for (int j = 0; j < k; ++j) f *= Scalar(i + k - j);
      d(i) = c_(i + k) * f;
    }
    return Polynomial(std::move(d));
  }

  /// Antiderivative vanishing at 0.
  Polynomial integral() const {
    Coeffs d = Coeffs::Zero(c_.size() + 1);
    for (Eigen::Index i = 0; i < c_.size(); ++i) d(i + 1) = c_(i) / Scalar(i + 1);
    return Polynomial(std::move(d));
  }

  /// q(x) = p(x + shift), computed by repeated synthetic division (Taylor shift).
  Polynomial shifted(Scalar shift) const {
    Coeffs a = c_;
    const Eigen::Index n = a.size();
    for (Eigen::Index i = 0; i < n - 1; ++i)
      for (Eigen::Index j = n - 2; j >= i; --j) a(j) += shift * a(j + 1);
    return Polynomial(std::move(a));
  }

  /// q(x) = p(s x).
  Polynomial scaled_argument(Scalar s) const {
    Coeffs a = c_;
    Scalar f(1);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      a(i) *= f;
      f *= s;
    }
    return Polynomial(std::move(a));
  }

  bool is_even(Scalar tol = Scalar(0)) const {
    for (Eigen::Index i = 1; i < c_.size(); i += 2)
      if (std::abs(c_(i)) > tol) return false;
    return true;
  }
  bool is_odd(Scalar tol = Scalar(0)) const {
    for (Eigen::Index i = 0; i < c_.size(); i += 2)
      if (std::abs(c_(i)) > tol) return false;
    return true;
  }

  /// Sum of absolute coefficients; a cheap magnitude used for relative tolerances.
  Scalar scale() const { return c_.cwiseAbs().sum(); }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.conservativeResizeLike(Coeffs::Zero(o.c_.size()));
    c_.head(o.c_.size()) += o.c_;
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.conservativeResizeLike(Coeffs::Zero(o.c_.size()));
    c_.head(o.c_.size()) -= o.c_;
    trim();
    return *this;
  }
  Polynomial& operator*=(Scalar s) {
    c_ *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Scalar s) { return a *= s; }
  friend Polynomial operator*(Scalar s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= Scalar(-1); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Coeffs r = Coeffs::Zero(a.c_.size() + b.c_.size() - 1);
    for (Eigen::Index i = 0; i < a.c_.size(); ++i)
      for (Eigen::Index j = 0; j < b.c_.size(); ++j) r(i + j) += a.c_(i) * b.c_(j);
    return Polynomial(std::move(r));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.c_.size() == b.c_.size() && a.c_ == b.c_;
  }

  std::vector<Scalar> to_vector() const { return {c_.data(), c_.data() + c_.size()}; }

  std::string to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (Eigen::Index i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << c_(i);
    os << ']';
    return os.str();
  }

 private:
  void trim() {
    Eigen::Index n = c_.size();
    while (n > 1 && c_(n - 1) == Scalar(0)) --n;
    if (n == 0) {
      c_ = Coeffs::Zero(1);
      return;
    }
    if (n != c_.size()) c_.conservativeResize(n);
  }

  Coeffs c_;
};

using Poly = Polynomial<double>;

/// Even polynomial of even degree >= 2; the representation of potentials and interactions.
class EvenPolynomial {
 public:
  explicit EvenPolynomial(Poly p) : p_(std::move(p)) {
    if (!p_.is_even())
      throw Error(ErrorCode::InvalidPolynomial, "polynomial has a nonzero odd coefficient: " + p_.to_string());
    if (p_.degree() < 2)
      throw Error(ErrorCode::InvalidPolynomial, "even polynomial must have degree >= 2: " + p_.to_string());
  }
  explicit EvenPolynomial(const std::vector<double>& c) : EvenPolynomial(Poly(c)) {}

  const Poly& poly() const { return p_; }
  operator const Poly&() const { return p_; }
  double operator()(double x) const { return p_(x); }
  int degree() const { return p_.degree(); }

 private:
  Poly p_;
};

}  // namespace mckean

#endif  // MCKEAN_POLYNOMIAL_HPP
