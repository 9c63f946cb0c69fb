#pragma once

#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace credalkit::exactq {

/// Raised when a rational literal does not match `[+-]?digits(/digits)?`
/// or names a zero denominator.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised on dimension mismatches between vectors, matrices and problems.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Exact rational number backed by GMP. Always held in canonical form
 * (positive denominator, numerator and denominator coprime).
 */
class Rational {
 public:
  Rational() = default;
  template <std::integral I>
  Rational(I value) : value_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)
  Rational(long numerator, long denominator);
  explicit Rational(const mpz_class& integer) : value_(integer) {}
  explicit Rational(mpq_class value);

  /// Parses the text form: optional sign, integer, optional "/" positive integer.
  static Rational parse(std::string_view text);

  [[nodiscard]] std::string str() const { return value_.get_str(); }
  [[nodiscard]] mpz_class numerator() const { return value_.get_num(); }
  [[nodiscard]] mpz_class denominator() const { return value_.get_den(); }
  [[nodiscard]] const mpq_class& raw() const { return value_; }

  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] bool is_zero() const { return sign() == 0; }
  [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
  [[nodiscard]] Rational abs() const { return Rational(::abs(value_)); }
  [[nodiscard]] double to_double() const { return value_.get_d(); }

  Rational& operator+=(const Rational& rhs) { value_ += rhs.value_; return *this; }
  Rational& operator-=(const Rational& rhs) { value_ -= rhs.value_; return *this; }
  Rational& operator*=(const Rational& rhs) { value_ *= rhs.value_; return *this; }
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  friend Rational operator-(const Rational& x) { return Rational(mpq_class(-x.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& x);

 private:
  mpq_class value_{0};
};

/// True iff gcd(|num|, den) = 1 and den > 0. Every Rational satisfies this.
bool is_canonical(const Rational& x);

/// Dense vector of rationals.
class QVector {
 public:
  QVector() = default;
  explicit QVector(std::size_t dim) : entries_(dim) {}
  QVector(std::size_t dim, const Rational& fill) : entries_(dim, fill) {}
  QVector(std::initializer_list<Rational> values) : entries_(values) {}
  explicit QVector(std::vector<Rational> values) : entries_(std::move(values)) {}

  static QVector parse(const std::vector<std::string>& texts);
  static QVector unit(std::size_t dim, std::size_t index);

  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  Rational& operator[](std::size_t i) { return entries_[i]; }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  [[nodiscard]] const Rational& at(std::size_t i) const { return entries_.at(i); }

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  [[nodiscard]] auto begin() const { return entries_.begin(); }
  [[nodiscard]] auto end() const { return entries_.end(); }

  void push_back(Rational x) { entries_.push_back(std::move(x)); }
  [[nodiscard]] const std::vector<Rational>& entries() const { return entries_; }

  [[nodiscard]] Rational sum() const;
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] std::vector<std::string> to_strings() const;

  QVector& operator+=(const QVector& rhs);
  QVector& operator-=(const QVector& rhs);
  QVector& operator*=(const Rational& s);

  friend QVector operator+(QVector a, const QVector& b) { return a += b; }
  friend QVector operator-(QVector a, const QVector& b) { return a -= b; }
  friend QVector operator*(QVector a, const Rational& s) { return a *= s; }
  friend QVector operator*(const Rational& s, QVector a) { return a *= s; }
  friend QVector operator-(QVector a) { return a *= Rational(-1); }

  friend bool operator==(const QVector&, const QVector&) = default;
  friend auto operator<=>(const QVector&, const QVector&) = default;

  friend std::ostream& operator<<(std::ostream& os, const QVector& v);

 private:
  std::vector<Rational> entries_;
};

Rational dot(const QVector& a, const QVector& b);

/// Positive rescaling of `v` to a primitive integer vector (coprime entries).
/// The zero vector is returned unchanged.
QVector primitive(const QVector& v);

/// Row-major dense rational matrix.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  QMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static QMatrix identity(std::size_t n);
  static QMatrix from_rows(const std::vector<QVector>& rows, std::size_t cols);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  [[nodiscard]] QVector row(std::size_t r) const;
  [[nodiscard]] QVector col(std::size_t c) const;
  [[nodiscard]] QMatrix transpose() const;

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QVector operator*(const QMatrix& a, const QVector& x);
  friend bool operator==(const QMatrix&, const QMatrix&) = default;

  /// rowᵀ·M, i.e. the functional `row` composed with the map M.
  [[nodiscard]] QVector left_multiply(const QVector& row) const;

  friend std::ostream& operator<<(std::ostream& os, const QMatrix& m);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> entries_;
};

}  // namespace credalkit::exactq

template <>
struct std::hash<credalkit::exactq::Rational> {
  std::size_t operator()(const credalkit::exactq::Rational& x) const noexcept {
    return std::hash<std::string>{}(x.str());
  }
};
