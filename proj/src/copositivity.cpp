#include "monocone/copositivity.hpp"

#include <optional>

#include "monocone/error.hpp"

namespace monocone {

SimplexQuadraticMin simplex_quadratic_min(const QRows& M) {
  const std::size_t n = M.size();
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "empty quadratic form");
  if (n > 20) throw Error(ErrorKind::kDimensionTooLarge, "simplex minimization supports at most 20 generators");

  std::optional<SimplexQuadraticMin> best;
  std::vector<std::size_t> support;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    support.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) support.push_back(i);
    }
    const std::size_t k = support.size();
    QRows sys(k + 1, QVec(k + 1, Rational(0)));
    QVec rhs = zeros(k + 1);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) sys[a][b] = M[support[a]][support[b]];
      sys[a][k] = -1;
      sys[k][a] = 1;
    }
    rhs[k] = 1;
    auto sol = solve_unique(sys, rhs, k + 1);
    if (!sol) continue;
    bool nonnegative = true;
    for (std::size_t a = 0; a < k; ++a) {
      if (sgn((*sol)[a]) < 0) {
        nonnegative = false;
        break;
      }
    }
    if (!nonnegative) continue;
    const Rational& mu = (*sol)[k];
    if (!best || mu < best->value) {
      SimplexQuadraticMin cand;
      cand.value = mu;
      cand.lambda = zeros(n);
      for (std::size_t a = 0; a < k; ++a) cand.lambda[support[a]] = (*sol)[a];
      best = std::move(cand);
    }
  }
  return *best;
}

CopositivityResult check_copositive(const PolyCone& C, const BilinearForm& B) {
  CopositivityResult out;
  const std::vector<QVec> gens = C.conic_generators();
  if (gens.empty()) return out;
  const std::size_t n = gens.size();
  std::vector<QVec> Bg;
  Bg.reserve(n);
  for (const auto& g : gens) Bg.push_back(mat_vec(B, g));

  QRows M(n, QVec(n));
  bool all_nonnegative = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      M[i][j] = dot(gens[i], Bg[j]);
      M[j][i] = M[i][j];
      if (sgn(M[i][j]) < 0) all_nonnegative = false;
    }
    if (sgn(M[i][i]) < 0) {
      out.copositive = false;
      out.min_simplex_value = M[i][i];
      out.witness = gens[i];
      return out;
    }
  }
  if (all_nonnegative) return out;

  const SimplexQuadraticMin m = simplex_quadratic_min(M);
  out.min_simplex_value = m.value;
  if (sgn(m.value) < 0) {
    out.copositive = false;
    out.witness = zeros(C.dim());
    for (std::size_t i = 0; i < n; ++i) {
      if (m.lambda[i] != 0) out.witness = add(out.witness, scale(m.lambda[i], gens[i]));
    }
  }
  return out;
}

}  // namespace monocone
