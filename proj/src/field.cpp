#include "hodiag/field.hpp"

#include <stdexcept>
#include <string>

namespace hd {

bool is_prime(elem n) {
  if (n < 2) return false;
  for (elem d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field::Field(elem prime) : p(prime) {
  if (!is_prime(prime))
    throw std::invalid_argument("field characteristic " + std::to_string(prime) + " is not prime");
  if (prime >= (1u << 31)) throw std::invalid_argument("field characteristic too large");
}

elem Field::inv(elem a) const {
  if (a == 0) throw std::domain_error("inverse of zero in F_p");
  // Extended Euclid on (a, p).
  long long t = 0, nt = 1, r = p, nr = a;
  while (nr != 0) {
    long long q = r / nr;
    long long tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  return reduce(t);
}

}  // namespace hd
