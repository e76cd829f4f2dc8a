#pragma once

#include <string>
#include <vector>

#include "monocone/hpolyhedron.hpp"
#include "monocone/lp.hpp"
#include "monocone/poly_cone.hpp"

namespace monocone {

using PieceList = std::vector<HPolyhedron>;

/// Activity of one piece: absent, or present with the given tight inequality rows.
struct PieceStatus {
  bool active = false;
  std::vector<std::size_t> tight;

  auto operator<=>(const PieceStatus&) const = default;
};

struct FaceSignature {
  std::vector<PieceStatus> status;

  bool any_active() const;
  std::string to_string() const;
  auto operator<=>(const FaceSignature&) const = default;
};

FaceSignature signature_at(const PieceList& pieces, const QVec& x);

/// Normal cone of P at x: cone of tight rows plus span of equality rows.
PolyCone regular_normal_cone(const HPolyhedron& P, const QVec& x);
/// Normal cone of the face of P where exactly the rows `tight` hold with equality.
PolyCone face_normal_cone(const HPolyhedron& P, const std::vector<std::size_t>& tight);
/// Intersection of the active pieces' face cones.
PolyCone signature_cone(const PieceList& pieces, const FaceSignature& sig);

PolyCone regular_normal_cone_union(const PieceList& pieces, const QVec& x);

/// A signature seen arbitrarily close to x, with its cone and a nearby witness.
struct LocalStratum {
  FaceSignature signature;
  PolyCone cone;
  QVec witness;  // within 1e-6 of x and carrying exactly this signature
};

std::vector<LocalStratum> local_strata(const PieceList& pieces, const QVec& x);

/// Distinct cones whose union is the limiting normal cone at x.
std::vector<PolyCone> limiting_normal_cone_union(const PieceList& pieces, const QVec& x);

bool signature_realizable_near(const PieceList& pieces, const QVec& x, const FaceSignature& sig);

/// One stratum of the whole union: the points sharing a signature.
struct Stratum {
  FaceSignature signature;
  std::vector<StrictSystem> branches;  // the stratum is the union of these convex sets
  QVec witness;                        // a point of the stratum
  PolyCone cone;                       // regular normal cone at every point of the stratum
};

/// Every nonempty stratum of the union (exact; intended for d <= 8).
std::vector<Stratum> enumerate_strata(const PieceList& pieces);

}  // namespace monocone
