#pragma once

#include <cstdint>
#include <utility>

#include "ultranorm/ultranorm.hpp"

namespace testing_support {

using namespace ultranorm;

inline const FieldSpec& two_adic() {
  static const FieldSpec f = FieldSpec::padic(2);
  return f;
}

inline DiagonalNorm unit2() { return DiagonalNorm::unit(two_adic(), 2); }

/// Basis (e1, e1 + 2 e2), weights (0, 0): lambda(unit, lattice) = (1, 0).
inline DiagonalNorm lattice2() {
  return DiagonalNorm(two_adic(), Mode::norm, Matrix::from_columns({{1, 0}, {1, 2}}), {0, 0});
}

/// Filtration with basis (e1, e1 + e2), weights (1, 0).
inline DiagonalNorm flag2() {
  return DiagonalNorm(two_adic(), Mode::filtration, Matrix::from_columns({{1, 0}, {1, 1}}), {1, 0});
}

struct Quadruple {
  DiagonalNorm nu0, nu0p, alpha, alphap;
  long p;
};

inline Quadruple random_quadruple(std::uint64_t seed, std::size_t max_dim = 5) {
  InstanceGenerator gen(seed);
  const std::size_t n = 1 + static_cast<std::size_t>(gen.uniform(0, static_cast<long>(max_dim) - 1));
  const long primes[] = {2, 3, 5};
  const long p = primes[gen.uniform(0, 2)];
  const FieldSpec f = FieldSpec::padic(p);
  return {gen.norm(f, Mode::filtration, n, 4), gen.norm(f, Mode::filtration, n, 4), gen.norm(f, Mode::norm, n, 4),
          gen.norm(f, Mode::norm, n, 4), p};
}

}  // namespace testing_support
