#include "hodiag/matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace hd {

namespace {
void check_same(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << op << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
       << b.cols();
    throw std::invalid_argument(os.str());
  }
}
}  // namespace

Matrix::Matrix(Field f, std::size_t rows, std::size_t cols)
    : f_(f), r_(rows), c_(cols), a_(rows * cols, 0) {}

Matrix Matrix::identity(Field f, std::size_t n) {
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(Field f, const std::vector<std::vector<long long>>& rows) {
  std::size_t nc = rows.empty() ? 0 : rows[0].size();
  return from_rows(f, rows.size(), nc, rows);
}

Matrix Matrix::from_rows(Field f, std::size_t nr, std::size_t nc,
                         const std::vector<std::vector<long long>>& data) {
  if (data.size() != nr) throw std::invalid_argument("from_rows: row count mismatch");
  Matrix m(f, nr, nc);
  for (std::size_t i = 0; i < nr; ++i) {
    if (data[i].size() != nc) throw std::invalid_argument("from_rows: ragged rows");
    for (std::size_t j = 0; j < nc; ++j) m.set(i, j, data[i][j]);
  }
  return m;
}

Matrix Matrix::column(Field f, const Vec& v) {
  Matrix m(f, v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m.at(i, 0) = v[i];
  return m;
}

Matrix Matrix::from_columns(Field f, std::size_t rows, const std::vector<Vec>& cols) {
  Matrix m(f, rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_col(j, cols[j]);
  return m;
}

Vec Matrix::col(std::size_t j) const {
  Vec v(r_);
  for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vec Matrix::row(std::size_t i) const {
  return Vec(a_.begin() + i * c_, a_.begin() + (i + 1) * c_);
}

void Matrix::set_col(std::size_t j, const Vec& v) {
  if (v.size() != r_) throw std::invalid_argument("set_col: length mismatch");
  for (std::size_t i = 0; i < r_; ++i) at(i, j) = v[i];
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (c_ != o.r_) {
    std::ostringstream os;
    os << "matrix product: " << r_ << "x" << c_ << " times " << o.r_ << "x" << o.c_;
    throw std::invalid_argument(os.str());
  }
  Matrix m(f_, r_, o.c_);
  const std::uint64_t p = f_.p;
  std::vector<std::uint64_t> acc(o.c_);
  for (std::size_t i = 0; i < r_; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < c_; ++k) {
      std::uint64_t x = (*this)(i, k);
      if (!x) continue;
      const elem* orow = &o.a_[k * o.c_];
      for (std::size_t j = 0; j < o.c_; ++j) acc[j] = (acc[j] + x * orow[j]) % p;
    }
    for (std::size_t j = 0; j < o.c_; ++j) m.at(i, j) = static_cast<elem>(acc[j]);
  }
  return m;
}

Vec Matrix::apply(const Vec& v) const {
  if (v.size() != c_) throw std::invalid_argument("apply: length mismatch");
  Vec out(r_, 0);
  for (std::size_t i = 0; i < r_; ++i) {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < c_; ++j) s = (s + static_cast<std::uint64_t>((*this)(i, j)) * v[j]) % f_.p;
    out[i] = static_cast<elem>(s);
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& o) const {
  check_same(*this, o, "add");
  Matrix m(f_, r_, c_);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = f_.add(a_[i], o.a_[i]);
  return m;
}

Matrix Matrix::operator-(const Matrix& o) const {
  check_same(*this, o, "sub");
  Matrix m(f_, r_, c_);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = f_.sub(a_[i], o.a_[i]);
  return m;
}

Matrix Matrix::operator-() const {
  Matrix m(f_, r_, c_);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = f_.neg(a_[i]);
  return m;
}

Matrix Matrix::scaled(elem s) const {
  Matrix m(f_, r_, c_);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = f_.mul(a_[i], s);
  return m;
}

Matrix Matrix::transpose() const {
  Matrix m(f_, c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) m.at(j, i) = (*this)(i, j);
  return m;
}

Matrix Matrix::hcat(const Matrix& o) const {
  if (r_ != o.r_) throw std::invalid_argument("hcat: row mismatch");
  Matrix m(f_, r_, c_ + o.c_);
  m.put(0, 0, *this);
  m.put(0, c_, o);
  return m;
}

Matrix Matrix::vcat(const Matrix& o) const {
  if (c_ != o.c_) throw std::invalid_argument("vcat: column mismatch");
  Matrix m(f_, r_ + o.r_, c_);
  m.put(0, 0, *this);
  m.put(r_, 0, o);
  return m;
}

Matrix Matrix::block_diag(const Matrix& a, const Matrix& b) {
  Matrix m(a.f_, a.r_ + b.r_, a.c_ + b.c_);
  m.put(0, 0, a);
  m.put(a.r_, a.c_, b);
  return m;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > r_ || c0 + nc > c_) throw std::out_of_range("block out of range");
  Matrix m(f_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) m.at(i, j) = (*this)(r0 + i, c0 + j);
  return m;
}

void Matrix::put(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.r_ > r_ || c0 + b.c_ > c_) throw std::out_of_range("put out of range");
  for (std::size_t i = 0; i < b.r_; ++i)
    for (std::size_t j = 0; j < b.c_; ++j) at(r0 + i, c0 + j) = b(i, j);
}

Matrix Matrix::select_cols(const std::vector<std::size_t>& idx) const {
  Matrix m(f_, r_, idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (std::size_t i = 0; i < r_; ++i) m.at(i, j) = (*this)(i, idx[j]);
  return m;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
  Matrix m(f_, idx.size(), c_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < c_; ++j) m.at(i, j) = (*this)(idx[i], j);
  return m;
}

bool Matrix::is_zero() const {
  for (elem x : a_)
    if (x) return false;
  return true;
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < r_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < c_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

Rref rref(const Matrix& in) {
  Rref out{in, {}};
  Matrix& m = out.m;
  const Field& f = in.field();
  std::size_t row = 0;
  for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(row, j));
    elem s = f.inv(m(row, c));
    for (std::size_t j = c; j < m.cols(); ++j) m.at(row, j) = f.mul(m(row, j), s);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, c) == 0) continue;
      elem t = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m.at(i, j) = f.sub(m(i, j), f.mul(t, m(row, j)));
    }
    out.pivots.push_back(c);
    ++row;
  }
  return out;
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

Vec vadd(const Field& f, const Vec& a, const Vec& b) {
  Vec o(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) o[i] = f.add(a[i], b[i]);
  return o;
}
Vec vsub(const Field& f, const Vec& a, const Vec& b) {
  Vec o(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) o[i] = f.sub(a[i], b[i]);
  return o;
}
Vec vscale(const Field& f, const Vec& a, elem s) {
  Vec o(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) o[i] = f.mul(a[i], s);
  return o;
}
bool vzero(const Vec& a) {
  for (elem x : a)
    if (x) return false;
  return true;
}
Vec unit(std::size_t n, std::size_t i) {
  Vec v(n, 0);
  v[i] = 1;
  return v;
}

std::optional<Vec> solve(const Matrix& m, const Vec& t) {
  if (t.size() != m.rows()) throw std::invalid_argument("solve: target length mismatch");
  auto x = solve_all(m, Matrix::column(m.field(), t));
  if (!x) return std::nullopt;
  return x->col(0);
}

std::optional<Matrix> solve_all(const Matrix& m, const Matrix& t) {
  if (t.rows() != m.rows()) throw std::invalid_argument("solve: target rows mismatch");
  Rref r = rref(m.hcat(t));
  const std::size_t n = m.cols();
  Matrix x(m.field(), n, t.cols());
  for (std::size_t i = 0; i < r.pivots.size(); ++i) {
    if (r.pivots[i] >= n) return std::nullopt;
    for (std::size_t j = 0; j < t.cols(); ++j) x.at(r.pivots[i], j) = r.m(i, n + j);
  }
  return x;
}

Matrix inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
  auto x = solve_all(m, Matrix::identity(m.field(), m.rows()));
  if (!x || rank(m) != m.rows()) throw std::domain_error("inverse: singular matrix");
  return *x;
}

}  // namespace hd
