#pragma once

#include <cstdint>

namespace hd {

using elem = std::uint32_t;

// Prime field F_p. Elements are kept in [0, p).
struct Field {
  elem p = 5;

  Field() = default;
  explicit Field(elem prime);

  elem reduce(long long v) const {
    long long r = v % static_cast<long long>(p);
    return static_cast<elem>(r < 0 ? r + p : r);
  }
  elem add(elem a, elem b) const {
    elem s = a + b;
    return s >= p ? s - p : s;
  }
  elem sub(elem a, elem b) const { return a >= b ? a - b : a + p - b; }
  elem neg(elem a) const { return a == 0 ? 0 : p - a; }
  elem mul(elem a, elem b) const {
    return static_cast<elem>((static_cast<std::uint64_t>(a) * b) % p);
  }
  elem inv(elem a) const;

  bool operator==(const Field&) const = default;
};

bool is_prime(elem n);

}  // namespace hd
