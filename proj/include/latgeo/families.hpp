#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latgeo/lattice.hpp"

namespace latgeo {

// Text form:
//   zn:N              ℤᴺ
//   rect:a1,a2,...    diagonal lattice with exact positive entries
//   modp:N,P,SEED     scaled random congruence lattice
//   kl:N              basis e_i/√i
//   hkz[CHILD]        HKZ-reduced basis of CHILD
//   sum[A|B|...]      orthogonal direct sum
struct FamilySpec {
  enum class Kind { Zn, Rectangular, DirectSum, ModP, KlBasis, HkzOf };
  Kind kind = Kind::Zn;
  int n = 0;
  std::vector<Rational> entries;  // rectangular
  Integer p = 0;                  // modp
  std::uint64_t seed = 0;         // modp
  std::vector<FamilySpec> children;

  static FamilySpec parse(const std::string& text);
  std::string to_string() const;
  Lattice build() const;
};

// p^{−1/n}·{x ∈ ℤⁿ : ⟨a,x⟩ ≡ 0 (mod p)} with an HNF basis.
Lattice modp_lattice(const std::vector<Integer>& a, const Integer& p);
// a drawn uniformly from (ℤ/p)ⁿ \ {0}.
Lattice random_modp_lattice(int n, const Integer& p, std::uint64_t seed);
std::vector<Integer> random_modp_vector(int n, const Integer& p, std::uint64_t seed);
Lattice kl_basis_lattice(int n);

}  // namespace latgeo
