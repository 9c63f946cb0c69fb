#include "credalkit/rational.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

namespace credalkit::exactq {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

Rational::Rational(long numerator, long denominator) {
  if (denominator == 0) throw std::domain_error("rational with zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw ParseError("malformed rational \"" + std::string(text) + "\"");
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw ParseError("zero denominator in rational \"" + std::string(text) + "\"");
  if (negative) n = -n;
  mpq_class q(n, d);
  q.canonicalize();
  return Rational(std::move(q));
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("division by zero");
  value_ /= rhs.value_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.str(); }

bool is_canonical(const Rational& x) {
  const mpz_class den = x.denominator();
  if (den <= 0) return false;
  mpz_class g;
  const mpz_class num = ::abs(x.numerator());
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return g == 1;
}

// ---------------------------------------------------------------------------

QVector QVector::parse(const std::vector<std::string>& texts) {
  QVector v;
  for (const auto& t : texts) v.push_back(Rational::parse(t));
  return v;
}

QVector QVector::unit(std::size_t dim, std::size_t index) {
  QVector v(dim);
  v[index] = 1;
  return v;
}

Rational QVector::sum() const {
  Rational s;
  for (const auto& x : entries_) s += x;
  return s;
}

bool QVector::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Rational& x) { return x.is_zero(); });
}

std::vector<std::string> QVector::to_strings() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& x : entries_) out.push_back(x.str());
  return out;
}

QVector& QVector::operator+=(const QVector& rhs) {
  if (rhs.size() != size()) throw DimensionError("vector addition: dimension mismatch");
  for (std::size_t i = 0; i < size(); ++i) entries_[i] += rhs.entries_[i];
  return *this;
}

QVector& QVector::operator-=(const QVector& rhs) {
  if (rhs.size() != size()) throw DimensionError("vector subtraction: dimension mismatch");
  for (std::size_t i = 0; i < size(); ++i) entries_[i] -= rhs.entries_[i];
  return *this;
}

QVector& QVector::operator*=(const Rational& s) {
  for (auto& x : entries_) x *= s;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const QVector& v) {
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  return os << ')';
}

Rational dot(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw DimensionError("dot product: dimension mismatch");
  mpq_class acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_zero() && !b[i].is_zero()) acc += a[i].raw() * b[i].raw();
  }
  return Rational(std::move(acc));
}

QVector primitive(const QVector& v) {
  if (v.is_zero()) return v;
  mpz_class lcm_den = 1;
  for (const auto& x : v) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), x.denominator().get_mpz_t());
  std::vector<mpz_class> ints;
  ints.reserve(v.size());
  mpz_class g = 0;
  for (const auto& x : v) {
    mpz_class n = x.numerator() * (lcm_den / x.denominator());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    ints.push_back(std::move(n));
  }
  QVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(mpz_class(ints[i] / g));
  return out;
}

// ---------------------------------------------------------------------------

QMatrix::QMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVector>& rows, std::size_t cols) {
  QMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionError("matrix row has wrong length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

QVector QMatrix::row(std::size_t r) const {
  QVector v(cols_);
  for (std::size_t c = 0; c < cols_; ++c) v[c] = (*this)(r, c);
  return v;
}

QVector QMatrix::col(std::size_t c) const {
  QVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: dimension mismatch");
  QMatrix m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rational& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (!b(k, j).is_zero()) m(i, j) += aik * b(k, j);
      }
    }
  }
  return m;
}

QVector operator*(const QMatrix& a, const QVector& x) {
  if (a.cols() != x.size()) throw DimensionError("matrix-vector product: dimension mismatch");
  QVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    mpq_class acc = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!a(i, j).is_zero() && !x[j].is_zero()) acc += a(i, j).raw() * x[j].raw();
    }
    y[i] = Rational(std::move(acc));
  }
  return y;
}

QVector QMatrix::left_multiply(const QVector& row) const {
  if (row.size() != rows_) throw DimensionError("functional composition: dimension mismatch");
  QVector out(cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row[r].is_zero()) continue;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (!(*this)(r, c).is_zero()) out[c] += row[r] * (*this)(r, c);
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const QMatrix& m) {
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) os << (r ? ", " : "") << m.row(r);
  return os << ']';
}

}  // namespace credalkit::exactq
