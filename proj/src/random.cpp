#include "hodiag/random.hpp"

namespace hd {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

elem random_prime(Rng& rng, std::initializer_list<elem> choices) {
  std::size_t i = uniform(rng, 0, choices.size() - 1);
  return *(choices.begin() + i);
}

Matrix random_matrix(const Field& f, std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(f, rows, cols);
  std::uniform_int_distribution<elem> dist(0, f.p - 1);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = dist(rng);
  return m;
}

Matrix random_low_rank(const Field& f, std::size_t rows, std::size_t cols, std::size_t r, Rng& rng) {
  return random_matrix(f, rows, r, rng) * random_matrix(f, r, cols, rng);
}

ChainComplex random_complex(const Field& f, int max_deg, std::size_t max_dim, Rng& rng) {
  std::vector<std::size_t> dims(max_deg + 1);
  for (auto& x : dims) x = uniform(rng, 0, max_dim);
  std::vector<Matrix> d(dims.size(), Matrix());
  for (int n = 1; n <= max_deg; ++n) {
    Subspace K = n == 1 ? Subspace::full(f, dims[0]) : kernel(d[n - 1]);
    std::size_t r = uniform(rng, 0, std::min(K.dim(), dims[n]));
    d[n] = K.basis() * random_low_rank(f, K.dim(), dims[n], r, rng);
  }
  return ChainComplex(f, dims, d);
}

ChainMap random_chain_map(const ChainComplex& s, const ChainComplex& t, Rng& rng) {
  const Field& f = s.field();
  Splitting sp = split_spheres_disks(s);
  const int len = s.length();
  // images[n] holds the image of each basis vector of s_n in t_n.
  std::vector<Matrix> images(len);
  for (int n = 0; n < len; ++n) images[n] = Matrix(f, t.dim(n), s.dim(n));
  std::vector<std::size_t> ntop(len + 1, 0), nbot(len, 0);
  for (int n = 0; n < len; ++n) {
    ntop[n] = complement(kernel(s.d(n))).dim();
  }
  for (int n = 0; n < len; ++n) nbot[n] = n + 1 < len ? ntop[n + 1] : 0;
  for (int n = len - 1; n >= 0; --n) {
    // Disk tops: free choice.
    Matrix tops = random_matrix(f, t.dim(n), ntop[n], rng);
    images[n].put(0, 0, tops);
    // Sphere reps: random cycles.
    std::size_t nsph = s.dim(n) - ntop[n] - nbot[n];
    Subspace Z = kernel(t.d(n));
    Matrix cyc = Z.basis() * random_matrix(f, Z.dim(), nsph, rng);
    images[n].put(0, ntop[n] + nbot[n], cyc);
  }
  // Disk bottoms are forced: f(dx) = d f(x).
  for (int n = 0; n + 1 < len; ++n) {
    Matrix tops_img = images[n + 1].block(0, 0, t.dim(n + 1), ntop[n + 1]);
    images[n].put(0, ntop[n], t.d(n + 1) * tops_img);
  }
  std::vector<Matrix> comps;
  for (int n = 0; n < len; ++n) comps.push_back(images[n] * inverse(sp.basis[n]));
  return ChainMap(s, t, comps);
}

}  // namespace hd
