#include "monocone/operator_json.hpp"

#include <fstream>
#include <sstream>

#include "monocone/error.hpp"

namespace monocone {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& why) {
  throw Error(ErrorKind::kParse, "field '" + where + "': " + why);
}

[[noreturn]] void mismatch(const std::string& where, const std::string& why) {
  throw Error(ErrorKind::kDimensionMismatch, "field '" + where + "': " + why);
}

const Json& field(const Json& j, const char* name, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) bad(where.empty() ? name : where + "." + name, "missing");
  return *it;
}

std::string join(const std::string& where, const std::string& name) { return where.empty() ? name : where + "." + name; }

std::optional<Rational> bound_from_json(const Json& j, const std::string& where, int infinite_sign) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "-inf") {
      const int sign = s[0] == '-' ? -1 : 1;
      if (sign != infinite_sign) bad(where, "infinite bound has the wrong sign");
      return std::nullopt;
    }
  }
  return rational_from_json(j, where);
}

Json bound_to_json(const std::optional<Rational>& b, const char* infinite) {
  return b ? rational_to_json(*b) : Json(infinite);
}

}  // namespace

Rational rational_from_json(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
    if (j.is_number()) return rational_from_double(j.get<double>());
  } catch (const Error& e) {
    bad(where, e.what());
  }
  bad(where, "expected a rational as \"p/q\" string or number");
}

Json rational_to_json(const Rational& q) { return q.get_str(); }

QVec qvec_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array");
  QVec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

Json qvec_to_json(const QVec& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(rational_to_json(q));
  return a;
}

QRows qrows_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array of rows");
  QRows rows;
  for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(qvec_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return rows;
}

Json qrows_to_json(const QRows& rows) {
  Json a = Json::array();
  for (const auto& r : rows) a.push_back(qvec_to_json(r));
  return a;
}

HPolyhedron polyhedron_from_json(const Json& j, std::size_t dim, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object with A, b, E, f");
  HPolyhedron P = HPolyhedron::whole_space(dim);
  const QRows A = j.contains("A") ? qrows_from_json(j["A"], join(where, "A")) : QRows{};
  const QVec b = j.contains("b") ? qvec_from_json(j["b"], join(where, "b")) : QVec{};
  const QRows E = j.contains("E") ? qrows_from_json(j["E"], join(where, "E")) : QRows{};
  const QVec f = j.contains("f") ? qvec_from_json(j["f"], join(where, "f")) : QVec{};
  if (A.size() != b.size()) bad(where, "A and b have different row counts");
  if (E.size() != f.size()) bad(where, "E and f have different row counts");
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i].size() != dim) bad(join(where, "A[" + std::to_string(i) + "]"), "expected " + std::to_string(dim) + " entries");
    P.add_inequality(A[i], b[i]);
  }
  for (std::size_t i = 0; i < E.size(); ++i) {
    if (E[i].size() != dim) bad(join(where, "E[" + std::to_string(i) + "]"), "expected " + std::to_string(dim) + " entries");
    P.add_equality(E[i], f[i]);
  }
  return P;
}

Json polyhedron_to_json(const HPolyhedron& P) {
  Json j;
  j["A"] = qrows_to_json(P.A);
  j["b"] = qvec_to_json(P.b);
  j["E"] = qrows_to_json(P.E);
  j["f"] = qvec_to_json(P.f);
  return j;
}

MaxQuadFunction function_from_json(const Json& j) {
  MaxQuadFunction f;
  const Json& dim = field(j, "dim", "");
  if (!dim.is_number_integer() || dim.get<long long>() < 1) bad("dim", "expected a positive integer");
  f.dim = dim.get<std::size_t>();
  const Json& pieces = field(j, "pieces", "");
  if (!pieces.is_array() || pieces.empty()) bad("pieces", "expected a nonempty array");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::string where = "pieces[" + std::to_string(i) + "]";
    MaxQuadFunction::Piece p;
    p.Q = pieces[i].contains("Q") ? qrows_from_json(pieces[i]["Q"], where + ".Q")
                                  : QRows(f.dim, zeros(f.dim));
    p.c = pieces[i].contains("c") ? qvec_from_json(pieces[i]["c"], where + ".c") : zeros(f.dim);
    p.d = pieces[i].contains("d") ? rational_from_json(pieces[i]["d"], where + ".d") : Rational(0);
    f.pieces.push_back(std::move(p));
  }
  f.validate();
  return f;
}

Json function_to_json(const MaxQuadFunction& f) {
  Json j;
  j["dim"] = f.dim;
  Json pieces = Json::array();
  for (const auto& p : f.pieces) {
    Json pj;
    pj["Q"] = qrows_to_json(p.Q);
    pj["c"] = qvec_to_json(p.c);
    pj["d"] = rational_to_json(p.d);
    pieces.push_back(std::move(pj));
  }
  j["pieces"] = std::move(pieces);
  return j;
}

OperatorPtr operator_from_json(const Json& j) {
  const Json& variant = field(j, "variant", "");
  if (!variant.is_string()) bad("variant", "expected a string");
  const std::string v = variant.get<std::string>();

  std::optional<std::size_t> dim;
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) bad("dim", "expected a positive integer");
    dim = j["dim"].get<std::size_t>();
  }
  auto need_dim = [&]() {
    if (!dim) bad("dim", "missing");
    return *dim;
  };
  auto check_dim = [&](const OperatorPtr& T) {
    if (dim && *dim != T->dim) bad("dim", "declared " + std::to_string(*dim) + " but operator has " + std::to_string(T->dim));
    return T;
  };

  if (v == "rational_map") {
    const std::size_t n = need_dim();
    const Json& comps = field(j, "components", "");
    if (!comps.is_array()) bad("components", "expected an array of expression strings");
    std::vector<std::string> exprs;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (!comps[i].is_string()) bad("components[" + std::to_string(i) + "]", "expected a string");
      exprs.push_back(comps[i].get<std::string>());
    }
    return make_rational_map(n, exprs);
  }
  if (v == "affine_box") {
    QRows A = qrows_from_json(field(j, "A", ""), "A");
    const std::size_t n = A.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (A[i].size() != n) mismatch("A[" + std::to_string(i) + "]", "expected " + std::to_string(n) + " entries (A must be square)");
    }
    QVec b = j.contains("b") ? qvec_from_json(j["b"], "b") : zeros(n);
    if (b.size() != n) mismatch("b", "expected " + std::to_string(n) + " entries");
    std::vector<std::optional<Rational>> lo(n), hi(n);
    if (j.contains("lo")) {
      const Json& l = j["lo"];
      if (!l.is_array() || l.size() != n) bad("lo", "expected " + std::to_string(n) + " entries");
      for (std::size_t i = 0; i < n; ++i) lo[i] = bound_from_json(l[i], "lo[" + std::to_string(i) + "]", -1);
    } else {
      lo.assign(n, Rational(0));
    }
    if (j.contains("hi")) {
      const Json& h = j["hi"];
      if (!h.is_array() || h.size() != n) bad("hi", "expected " + std::to_string(n) + " entries");
      for (std::size_t i = 0; i < n; ++i) hi[i] = bound_from_json(h[i], "hi[" + std::to_string(i) + "]", 1);
    } else {
      hi.assign(n, Rational(0));
    }
    return check_dim(make_affine_box(std::move(A), std::move(b), std::move(lo), std::move(hi)));
  }
  if (v == "polyhedral_graph_union") {
    const std::size_t n = need_dim();
    const Json& pieces = field(j, "pieces", "");
    if (!pieces.is_array()) bad("pieces", "expected an array");
    PieceList list;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      list.push_back(polyhedron_from_json(pieces[i], 2 * n, "pieces[" + std::to_string(i) + "]"));
    }
    return make_polyhedral_graph(n, std::move(list));
  }
  if (v == "max_quad_subdiff") {
    return check_dim(make_max_quad_subdiff(function_from_json(field(j, "function", ""))));
  }
  if (v == "shift_identity") {
    return check_dim(make_shift_identity(operator_from_json(field(j, "base", "")), rational_from_json(field(j, "s", ""), "s")));
  }
  if (v == "shift_down") {
    return check_dim(
        make_shift_down(operator_from_json(field(j, "base", "")), rational_from_json(field(j, "kappa", ""), "kappa")));
  }
  if (v == "inverse") return check_dim(make_inverse(operator_from_json(field(j, "base", ""))));
  bad("variant", "unknown variant '" + v + "'");
}

Json operator_to_json(const OperatorSpec& T) {
  Json j;
  j["dim"] = T.dim;
  j["variant"] = variant_name(T);
  if (const auto* m = std::get_if<RationalMapSpec>(&T.variant)) {
    j["components"] = m->expressions;
  } else if (const auto* a = std::get_if<AffineBoxSpec>(&T.variant)) {
    j["A"] = qrows_to_json(a->A);
    j["b"] = qvec_to_json(a->b);
    Json lo = Json::array();
    Json hi = Json::array();
    for (std::size_t i = 0; i < T.dim; ++i) {
      lo.push_back(bound_to_json(a->lo[i], "-inf"));
      hi.push_back(bound_to_json(a->hi[i], "inf"));
    }
    j["lo"] = std::move(lo);
    j["hi"] = std::move(hi);
  } else if (const auto* g = std::get_if<PolyhedralGraphSpec>(&T.variant)) {
    Json pieces = Json::array();
    for (const auto& P : g->pieces) pieces.push_back(polyhedron_to_json(P));
    j["pieces"] = std::move(pieces);
  } else if (const auto* q = std::get_if<MaxQuadSubdiffSpec>(&T.variant)) {
    j["function"] = function_to_json(q->f);
  } else if (const auto* s = std::get_if<ShiftIdentitySpec>(&T.variant)) {
    j["s"] = rational_to_json(s->s);
    j["base"] = operator_to_json(*s->base);
  } else if (const auto* d = std::get_if<ShiftDownSpec>(&T.variant)) {
    j["kappa"] = rational_to_json(d->kappa);
    j["base"] = operator_to_json(*d->base);
  } else if (const auto* inv = std::get_if<InverseSpec>(&T.variant)) {
    j["base"] = operator_to_json(*inv->base);
  }
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParse, path + ": " + e.what());
  }
}

}  // namespace monocone
