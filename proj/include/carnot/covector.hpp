#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace carnot {

// Strictly increasing index set I as a bit mask (bit i <-> theta_{i+1}).
using Mask = std::uint32_t;

inline int mask_degree(Mask m) { return std::popcount(m); }

inline std::vector<int> mask_indices(Mask m) {
  std::vector<int> out;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1u) out.push_back(i);
  return out;
}

inline Mask mask_of(const std::vector<int>& indices) {
  Mask m = 0;
  for (int i : indices) m |= Mask{1} << i;
  return m;
}

inline Mask full_mask(std::size_t n) { return n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1; }

// theta_A ^ theta_B = sign * theta_{A|B}; 0 when A and B overlap.
inline int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int inversions = 0;
  for (Mask bb = b; bb; bb &= bb - 1) {
    int j = std::countr_zero(bb);
    inversions += std::popcount(a & ~((Mask{2} << j) - 1));
  }
  return inversions % 2 ? -1 : 1;
}

inline int mask_weight(Mask m, const std::vector<int>& weights) {
  int w = 0;
  for (int i : mask_indices(m)) w += weights.at(i);
  return w;
}

// Masks of degree k in increasing numeric order of their index tuples.
std::vector<Mask> masks_of_degree(std::size_t n, int k);

// "θ1∧θ3" style name, or "1" for the empty mask.
std::string mask_to_string(Mask m, const std::vector<std::string>& covector_labels);

}  // namespace carnot
