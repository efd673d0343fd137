#pragma once

#include <cstdint>
#include <random>

#include "cotor/complex.hpp"

namespace cotor {

using Rng = std::mt19937_64;

namespace detail {

inline long long pick(Rng& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace detail

/// Random module with at most `max_gens` generators. Over Z/n only free modules
/// are drawn: bounded complexes of them have bounded cofibrant replacements.
inline FpModule random_module(Rng& rng, const Ring& r, std::size_t max_gens = 3) {
  if (r.is_finite()) return FpModule::free(r, static_cast<std::size_t>(detail::pick(rng, 0, static_cast<long long>(max_gens))));
  static const long long torsion[] = {2, 3, 4, 6};
  FpModule M = FpModule::zero(r);
  std::size_t g = static_cast<std::size_t>(detail::pick(rng, 0, static_cast<long long>(max_gens)));
  for (std::size_t k = 0; k < g; ++k) {
    if (rng() % 3 == 0) M = direct_sum(M, FpModule::cyclic(r, torsion[rng() % 4]));
    else M = direct_sum(M, FpModule::free(r, 1));
  }
  return M;
}

/// Random combination of the given matrices with coefficients in [-2, 2].
inline Matrix random_combination(Rng& rng, const std::vector<Matrix>& gens, const Matrix& zero) {
  Matrix out = zero;
  for (auto& g : gens) out = out + g.scaled(Int(detail::pick(rng, -2, 2)));
  return out;
}

/// Random bounded complex: support length <= max_len, <= max_gens generators per degree.
inline ChainComplex random_complex(Rng& rng, const Ring& r, int max_len = 4, std::size_t max_gens = 3) {
  int lo = static_cast<int>(detail::pick(rng, -1, 1));
  int len = static_cast<int>(detail::pick(rng, 1, max_len));
  std::vector<FpModule> objs;
  std::vector<Matrix> diffs;
  for (int k = 0; k < len; ++k) objs.push_back(random_module(rng, r, max_gens));
  for (int k = 1; k < len; ++k) {
    const FpModule& src = objs[k];
    const FpModule& tgt = objs[k - 1];
    LinearSystem sys(r);
    std::size_t v = sys.add_unknown(tgt.gens(), src.gens());
    Matrix zero(r, tgt.gens(), src.gens());
    if (tgt.gens() && src.gens()) {
      sys.add_constraint({{Matrix::identity(r, tgt.gens()), v, src.relations()}}, Matrix(r, tgt.gens(), src.relations().cols()),
                         tgt.lattice());
      if (k >= 2 && objs[k - 2].gens())
        sys.add_constraint({{diffs.back(), v, Matrix::identity(r, src.gens())}}, Matrix(r, objs[k - 2].gens(), src.gens()),
                           objs[k - 2].lattice());
      std::vector<Matrix> gens;
      for (auto& sol : sys.kernel_generators()) gens.push_back(sol[v]);
      diffs.push_back(rng() % 4 == 0 ? zero : random_combination(rng, gens, zero));
    } else {
      diffs.push_back(zero);
    }
  }
  return ChainComplex(r, lo, objs, diffs);
}

/// Random chain map X -> Y from a generating set of Hom.
inline ChainMap random_chain_map(Rng& rng, const ChainComplex& X, const ChainComplex& Y) {
  ChainHom H = chain_hom(X, Y);
  std::map<int, Matrix> c;
  for (int n : H.degrees) c[n] = Matrix(X.ring(), Y.obj(n).gens(), X.obj(n).gens());
  for (auto& g : H.generators) {
    Int k(detail::pick(rng, -2, 2));
    for (int n : H.degrees) c[n] = c[n] + g.matrix(n).scaled(k);
  }
  return ChainMap(X, Y, c);
}

}  // namespace cotor
