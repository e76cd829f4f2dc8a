#pragma once

#include <optional>
#include <string>
#include <vector>

#include "monocone/hpolyhedron.hpp"
#include "monocone/stratification.hpp"

namespace monocone {

/// f(x) = max_i { 1/2 x'Q_i x + c_i'x + d_i } with symmetric Q_i.
struct MaxQuadFunction {
  struct Piece {
    QRows Q;
    QVec c;
    Rational d;
  };

  std::size_t dim = 0;
  std::vector<Piece> pieces;

  /// Throws DimensionMismatch / InvalidArgument on malformed data.
  void validate() const;

  Rational piece_value(std::size_t i, const QVec& x) const;
  Rational value(const QVec& x) const;
  double value(const std::vector<double>& x) const;
  QVec piece_gradient(std::size_t i, const QVec& x) const;

  /// Indices of pieces attaining the max exactly.
  std::vector<std::size_t> active_pieces(const QVec& x) const;
  /// Indices within `tol` of the max, for floating inputs.
  std::vector<std::size_t> active_pieces(const std::vector<double>& x, double tol) const;

  /// The common quadratic matrix when every piece shares it.
  std::optional<QRows> shared_q() const;
  /// Upper bound on the Lipschitz modulus of every piece gradient (max Frobenius norm).
  double gradient_lipschitz_bound() const;

  std::string to_string() const;
};

/// g(x) = f(x) - (kappa/2)|x|^2, i.e. every Q_i replaced by Q_i - kappa I.
MaxQuadFunction shifted_function(const MaxQuadFunction& f, const Rational& kappa);

/// Exact polyhedral description of gph(subdifferential of f) in R^(2n).
/// Supported when n = 1 with rational breakpoints, or when all pieces share Q.
PieceList compile_subdifferential_graph(const MaxQuadFunction& f);

/// Removes pieces contained in another piece (keeps the first of equal pieces).
PieceList prune_contained(PieceList pieces);

}  // namespace monocone
