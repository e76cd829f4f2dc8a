#include "monocone/stratification.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "monocone/error.hpp"

namespace monocone {

bool FaceSignature::any_active() const {
  return std::any_of(status.begin(), status.end(), [](const PieceStatus& s) { return s.active; });
}

std::string FaceSignature::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < status.size(); ++i) {
    if (!s.empty()) s += " ";
    s += "P" + std::to_string(i) + ":";
    if (!status[i].active) {
      s += "out";
      continue;
    }
    s += "{";
    for (std::size_t k = 0; k < status[i].tight.size(); ++k) {
      if (k) s += ",";
      s += std::to_string(status[i].tight[k]);
    }
    s += "}";
  }
  return s;
}

FaceSignature signature_at(const PieceList& pieces, const QVec& x) {
  FaceSignature sig;
  sig.status.resize(pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].contains(x)) {
      sig.status[i].active = true;
      sig.status[i].tight = pieces[i].tight_rows(x);
    }
  }
  return sig;
}

PolyCone face_normal_cone(const HPolyhedron& P, const std::vector<std::size_t>& tight) {
  std::vector<QVec> rays;
  rays.reserve(tight.size());
  for (std::size_t i : tight) rays.push_back(P.A[i]);
  return PolyCone::from_generators(P.dim, std::move(rays), P.E);
}

PolyCone regular_normal_cone(const HPolyhedron& P, const QVec& x) {
  if (x.size() != P.dim) throw Error(ErrorKind::kDimensionMismatch, "normal cone point length");
  if (!P.contains(x)) throw Error(ErrorKind::kNotMember, "point " + to_string(x) + " is not in the polyhedron");
  return face_normal_cone(P, P.tight_rows(x));
}

namespace {

std::size_t union_dim(const PieceList& pieces) {
  if (pieces.empty()) throw Error(ErrorKind::kEmptySet, "empty piece list");
  return pieces.front().dim;
}

// Cache of face cones keyed by (piece, tight set); conversions are the costly part.
class FaceConeCache {
 public:
  explicit FaceConeCache(const PieceList& pieces) : pieces_(pieces) {}

  const PolyCone& get(std::size_t piece, const std::vector<std::size_t>& tight) {
    auto key = std::make_pair(piece, tight);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(std::move(key), face_normal_cone(pieces_[piece], tight)).first->second;
  }

  PolyCone signature_cone(const FaceSignature& sig) {
    const std::size_t d = union_dim(pieces_);
    QRows G;
    QRows F;
    bool any = false;
    for (std::size_t i = 0; i < sig.status.size(); ++i) {
      if (!sig.status[i].active) continue;
      const PolyCone& c = get(i, sig.status[i].tight);
      G.insert(G.end(), c.G().begin(), c.G().end());
      F.insert(F.end(), c.F().begin(), c.F().end());
      any = true;
    }
    if (!any) throw Error(ErrorKind::kNotMember, "signature has no active piece");
    return PolyCone::from_halfspaces(d, std::move(G), std::move(F));
  }

 private:
  const PieceList& pieces_;
  std::map<std::pair<std::size_t, std::vector<std::size_t>>, PolyCone> cache_;
};

}  // namespace

PolyCone signature_cone(const PieceList& pieces, const FaceSignature& sig) {
  FaceConeCache cache(pieces);
  return cache.signature_cone(sig);
}

PolyCone regular_normal_cone_union(const PieceList& pieces, const QVec& x) {
  const FaceSignature sig = signature_at(pieces, x);
  if (!sig.any_active()) throw Error(ErrorKind::kNotMember, "point " + to_string(x) + " is not in the union");
  return signature_cone(pieces, sig);
}

namespace {

// Homogeneous tangent-direction systems for the pieces containing x.
// Each accepted leaf is a direction h such that x + eps h has the leaf signature.
struct LocalEnumerator {
  const PieceList& pieces;
  const QVec& x;
  std::size_t d;
  std::vector<std::size_t> containing;
  std::vector<std::vector<std::size_t>> tight_at_x;
  std::function<void(const FaceSignature&, const QVec&)> visit;

  void run() {
    FaceSignature sig;
    sig.status.resize(pieces.size());
    StrictSystem sys(d);
    rec(0, sig, sys);
  }

  void rec(std::size_t k, FaceSignature& sig, const StrictSystem& sys) {
    if (k == containing.size()) {
      if (!sig.any_active()) return;
      auto h = strictly_feasible_point(sys);
      if (h) visit(sig, *h);
      return;
    }
    const std::size_t i = containing[k];
    const HPolyhedron& P = pieces[i];
    const auto& T = tight_at_x[k];

    // Active: choose which of the rows tight at x stay tight.
    const std::size_t t = T.size();
    for (std::uint32_t mask = 0; mask < (1u << t); ++mask) {
      StrictSystem next = sys;
      std::vector<std::size_t> J;
      for (const auto& e : P.E) next.closed.add_equality(e, 0);
      for (std::size_t r = 0; r < t; ++r) {
        if (mask & (1u << r)) {
          J.push_back(T[r]);
          next.closed.add_equality(P.A[T[r]], 0);
        } else {
          next.add_strict(P.A[T[r]], 0);
        }
      }
      if (!strictly_feasible_point(next)) continue;
      sig.status[i] = PieceStatus{true, J};
      rec(k + 1, sig, next);
      sig.status[i] = PieceStatus{};
    }

    // Inactive: the first violated row among those tight at x.
    for (std::size_t r = 0; r < t; ++r) {
      StrictSystem next = sys;
      for (std::size_t q = 0; q < r; ++q) next.closed.add_inequality(P.A[T[q]], 0);
      next.add_strict(negate(P.A[T[r]]), 0);
      if (strictly_feasible_point(next)) rec(k + 1, sig, next);
    }
    for (std::size_t l = 0; l < P.E.size(); ++l) {
      for (int side : {1, -1}) {
        StrictSystem next = sys;
        for (std::size_t r : T) next.closed.add_inequality(P.A[r], 0);
        for (std::size_t q = 0; q < l; ++q) next.closed.add_equality(P.E[q], 0);
        next.add_strict(scale(Rational(side), P.E[l]), 0);
        if (strictly_feasible_point(next)) rec(k + 1, sig, next);
      }
    }
  }
};

QVec nearby_witness(const PieceList& pieces, const QVec& x, const QVec& h, const FaceSignature& sig) {
  Rational l1 = 0;
  for (const auto& hi : h) l1 += abs(hi);
  if (sgn(l1) == 0) return x;
  Rational eps = 1 / (l1 * 1000000);
  for (int iter = 0; iter < 200; ++iter) {
    QVec p = add(x, scale(eps, h));
    if (signature_at(pieces, p) == sig) return p;
    eps /= 2;
  }
  throw Error(ErrorKind::kInvalidArgument, "no witness for signature " + sig.to_string());
}

LocalEnumerator make_local(const PieceList& pieces, const QVec& x) {
  LocalEnumerator e{pieces, x, union_dim(pieces), {}, {}, {}};
  if (x.size() != e.d) throw Error(ErrorKind::kDimensionMismatch, "point length");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].contains(x)) {
      e.containing.push_back(i);
      e.tight_at_x.push_back(pieces[i].tight_rows(x));
    }
  }
  if (e.containing.empty()) throw Error(ErrorKind::kNotMember, "point " + to_string(x) + " is not in the union");
  return e;
}

}  // namespace

std::vector<LocalStratum> local_strata(const PieceList& pieces, const QVec& x) {
  LocalEnumerator e = make_local(pieces, x);
  std::map<FaceSignature, QVec> found;
  e.visit = [&](const FaceSignature& sig, const QVec& h) { found.emplace(sig, h); };
  e.run();
  FaceConeCache cache(pieces);
  std::vector<LocalStratum> out;
  for (const auto& [sig, h] : found) {
    out.push_back(LocalStratum{sig, cache.signature_cone(sig), nearby_witness(pieces, x, h, sig)});
  }
  return out;
}

std::vector<PolyCone> limiting_normal_cone_union(const PieceList& pieces, const QVec& x) {
  std::vector<PolyCone> out;
  for (auto& s : local_strata(pieces, x)) {
    bool dup = std::any_of(out.begin(), out.end(), [&](const PolyCone& c) { return cone_equal(c, s.cone); });
    if (!dup) out.push_back(std::move(s.cone));
  }
  return out;
}

bool signature_realizable_near(const PieceList& pieces, const QVec& x, const FaceSignature& sig) {
  if (pieces.empty() || sig.status.size() != pieces.size() || !sig.any_active()) return false;
  const std::size_t d = union_dim(pieces);
  if (x.size() != d) return false;
  // Pieces and tight rows required by sig must already hold at x.
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (!sig.status[i].active) continue;
    if (!pieces[i].contains(x)) return false;
    for (std::size_t r : sig.status[i].tight) {
      if (r >= pieces[i].A.size() || dot(pieces[i].A[r], x) != pieces[i].b[r]) return false;
    }
  }
  LocalEnumerator e = make_local(pieces, x);
  bool hit = false;
  e.visit = [&](const FaceSignature& s, const QVec&) {
    if (s == sig) hit = true;
  };
  e.run();
  return hit;
}

namespace {

struct GlobalEnumerator {
  const PieceList& pieces;
  std::size_t d;
  std::map<FaceSignature, Stratum> strata;

  void rec(std::size_t i, FaceSignature& sig, const StrictSystem& sys, const QVec& point) {
    if (i == pieces.size()) {
      if (!sig.any_active()) return;
      auto it = strata.find(sig);
      if (it == strata.end()) {
        Stratum s;
        s.signature = sig;
        s.witness = point;
        it = strata.emplace(sig, std::move(s)).first;
      }
      it->second.branches.push_back(sys);
      return;
    }
    const HPolyhedron& P = pieces[i];

    // Does the current cell meet P at all? If not, the piece is inactive throughout.
    StrictSystem meet = sys;
    for (std::size_t r = 0; r < P.A.size(); ++r) meet.closed.add_inequality(P.A[r], P.b[r]);
    for (std::size_t r = 0; r < P.E.size(); ++r) meet.closed.add_equality(P.E[r], P.f[r]);
    if (!strictly_feasible_point(meet)) {
      rec(i + 1, sig, sys, point);
      return;
    }

    // Active: decide each row tight or strict.
    StrictSystem active = sys;
    for (std::size_t r = 0; r < P.E.size(); ++r) active.closed.add_equality(P.E[r], P.f[r]);
    if (auto p = strictly_feasible_point(active)) {
      std::vector<std::size_t> J;
      rows(i, 0, J, sig, active, *p);
    }

    // Inactive: the first violated row.
    for (std::size_t r = 0; r < P.A.size(); ++r) {
      StrictSystem next = sys;
      for (std::size_t q = 0; q < r; ++q) next.closed.add_inequality(P.A[q], P.b[q]);
      next.add_strict(negate(P.A[r]), -P.b[r]);
      if (auto p = strictly_feasible_point(next)) rec(i + 1, sig, next, *p);
    }
    for (std::size_t l = 0; l < P.E.size(); ++l) {
      for (int side : {1, -1}) {
        StrictSystem next = sys;
        for (std::size_t r = 0; r < P.A.size(); ++r) next.closed.add_inequality(P.A[r], P.b[r]);
        for (std::size_t q = 0; q < l; ++q) next.closed.add_equality(P.E[q], P.f[q]);
        next.add_strict(scale(Rational(side), P.E[l]), side * P.f[l]);
        if (auto p = strictly_feasible_point(next)) rec(i + 1, sig, next, *p);
      }
    }
  }

  void rows(std::size_t i, std::size_t r, std::vector<std::size_t>& J, FaceSignature& sig, const StrictSystem& sys,
            const QVec& point) {
    const HPolyhedron& P = pieces[i];
    if (r == P.A.size()) {
      sig.status[i] = PieceStatus{true, J};
      rec(i + 1, sig, sys, point);
      sig.status[i] = PieceStatus{};
      return;
    }
    // Skip LPs when the current point already decides the row.
    const Rational lhs = dot(P.A[r], point);
    {
      StrictSystem next = sys;
      next.add_strict(P.A[r], P.b[r]);
      if (lhs < P.b[r]) {
        rows(i, r + 1, J, sig, next, point);
      } else if (auto p = strictly_feasible_point(next)) {
        rows(i, r + 1, J, sig, next, *p);
      }
    }
    {
      StrictSystem next = sys;
      next.closed.add_equality(P.A[r], P.b[r]);
      std::optional<QVec> p;
      if (lhs == P.b[r]) {
        p = point;
      } else {
        p = strictly_feasible_point(next);
      }
      if (p) {
        J.push_back(r);
        rows(i, r + 1, J, sig, next, *p);
        J.pop_back();
      }
    }
  }
};

}  // namespace

std::vector<Stratum> enumerate_strata(const PieceList& pieces) {
  GlobalEnumerator e{pieces, union_dim(pieces), {}};
  FaceSignature sig;
  sig.status.resize(pieces.size());
  e.rec(0, sig, StrictSystem(e.d), zeros(e.d));
  FaceConeCache cache(pieces);
  std::vector<Stratum> out;
  out.reserve(e.strata.size());
  for (auto& [s, stratum] : e.strata) {
    stratum.cone = cache.signature_cone(s);
    out.push_back(std::move(stratum));
  }
  return out;
}

}  // namespace monocone
