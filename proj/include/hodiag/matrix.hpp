#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hodiag/field.hpp"

namespace hd {

using Vec = std::vector<elem>;

// Dense row-major matrix over F_p. Empty shapes (0 x n, n x 0) are allowed.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Field f, std::size_t rows, std::size_t cols);

  static Matrix zero(Field f, std::size_t rows, std::size_t cols) { return Matrix(f, rows, cols); }
  static Matrix identity(Field f, std::size_t n);
  // Entries are reduced mod p, negative values allowed.
  static Matrix from_rows(Field f, const std::vector<std::vector<long long>>& rows);
  static Matrix from_rows(Field f, std::size_t rows, std::size_t cols,
                          const std::vector<std::vector<long long>>& data);
  static Matrix column(Field f, const Vec& v);
  static Matrix from_columns(Field f, std::size_t rows, const std::vector<Vec>& cols);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  const Field& field() const { return f_; }

  elem operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  elem& at(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  void set(std::size_t i, std::size_t j, long long v) { a_[i * c_ + j] = f_.reduce(v); }

  Vec col(std::size_t j) const;
  Vec row(std::size_t i) const;
  void set_col(std::size_t j, const Vec& v);

  Matrix operator*(const Matrix& o) const;
  Vec apply(const Vec& v) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator-() const;
  Matrix scaled(elem s) const;
  Matrix transpose() const;

  Matrix hcat(const Matrix& o) const;
  Matrix vcat(const Matrix& o) const;
  static Matrix block_diag(const Matrix& a, const Matrix& b);
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void put(std::size_t r0, std::size_t c0, const Matrix& b);
  Matrix select_cols(const std::vector<std::size_t>& idx) const;
  Matrix select_rows(const std::vector<std::size_t>& idx) const;

  bool is_zero() const;
  bool operator==(const Matrix& o) const {
    return r_ == o.r_ && c_ == o.c_ && a_ == o.a_;
  }
  const std::vector<elem>& data() const { return a_; }
  std::string str() const;

 private:
  Field f_;
  std::size_t r_ = 0, c_ = 0;
  std::vector<elem> a_;
};

struct Rref {
  Matrix m;                        // reduced row echelon form
  std::vector<std::size_t> pivots; // pivot column of each nonzero row
};

Rref rref(const Matrix& m);
std::size_t rank(const Matrix& m);

// Vectors helpers.
Vec vadd(const Field& f, const Vec& a, const Vec& b);
Vec vsub(const Field& f, const Vec& a, const Vec& b);
Vec vscale(const Field& f, const Vec& a, elem s);
bool vzero(const Vec& a);
Vec unit(std::size_t n, std::size_t i);

// m v = t with free coordinates zero, or nullopt when t is not in the image.
std::optional<Vec> solve(const Matrix& m, const Vec& t);
// Columnwise solve of m X = T.
std::optional<Matrix> solve_all(const Matrix& m, const Matrix& t);
// Inverse of a square matrix; throws if singular.
Matrix inverse(const Matrix& m);

}  // namespace hd
