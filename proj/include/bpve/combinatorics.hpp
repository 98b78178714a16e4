#pragma once

#include <cstdint>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace bpve {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_factorial(std::uint64_t n) {
  BigInt f = 1;
  for (std::uint64_t i = 2; i <= n; ++i) f *= i;
  return f;
}

inline BigInt big_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt b = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    b *= n - k + i;
    b /= i;  // exact at every step: b is binom(n-k+i, i)
  }
  return b;
}

// Number of ordered compositions of a into j positive parts: binom(a-1, j-1).
inline BigInt composition_count(std::uint64_t a, std::uint64_t j) {
  if (j < 1 || j > a)
    throw std::invalid_argument("composition_count requires 1 <= j <= a");
  return big_binomial(a - 1, j - 1);
}

// sum_{j=0}^{a} (a+j)! / (j! j! (a-j)!) * (-1)^(a-j).
//
// This alternating sum arises as the n -> infinity limit of
// n * P(Z_{k+n} = a | Z_k = a) in the critical homogeneous case and collapses
// to 1 for every a; it is evaluated in exact integer arithmetic on purpose,
// since the terms grow like 4^a while the total stays at 1.
inline BigInt alternating_return_identity(std::uint64_t a) {
  BigInt sum = 0;
  for (std::uint64_t j = 0; j <= a; ++j) {
    BigInt term = big_factorial(a + j) /
                  (big_factorial(j) * big_factorial(j) * big_factorial(a - j));
    if ((a - j) % 2 == 1) term = -term;
    sum += term;
  }
  return sum;
}

}  // namespace bpve
