#include "arbor/io.hpp"

#include <fstream>
#include <sstream>

namespace arbor {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where.empty() ? "/" : where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + "/" + key, "missing field");
  return *it;
}

std::int64_t integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where, "expected an integer");
  return j.get<std::int64_t>();
}

const json& array_of(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || (n && j.size() != n))
    throw ParseError(where, n ? "expected an array of length " + std::to_string(n) : "expected an array");
  return j;
}

ModMat matrix(const ModCtx& ctx, const json& j, const std::string& where) {
  array_of(j, 2, where);
  std::int64_t e[4];
  for (int i = 0; i < 2; ++i) {
    const std::string row = where + "/" + std::to_string(i);
    array_of(j[i], 2, row);
    for (int k = 0; k < 2; ++k) e[2 * i + k] = integer(j[i][k], row + "/" + std::to_string(k));
  }
  ModMat g(ctx, e[0], e[1], e[2], e[3]);
  if (!g.is_invertible()) throw ParseError(where, "matrix is not invertible mod " + std::to_string(ctx.ell()));
  return g;
}

ModVec vector2(const ModCtx& ctx, const json& j, const std::string& where) {
  array_of(j, 2, where);
  return ModVec(ctx, integer(j[0], where + "/0"), integer(j[1], where + "/1"));
}

json matrix_json(const ModMat& g) {
  return json::array({json::array({g(0, 0), g(0, 1)}), json::array({g(1, 0), g(1, 1)})});
}

std::uint64_t u64(const json& j, const char* key) { return field(j, key, "").get<std::uint64_t>(); }

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ParseError(path + " byte " + std::to_string(e.byte), "malformed JSON");
  }
}

SubgroupSpec parse_group(const json& j) {
  const std::int64_t ell = integer(field(j, "ell", ""), "/ell");
  const std::int64_t level = integer(field(j, "level", ""), "/level");
  if (ell < 2 || !is_prime(static_cast<std::uint64_t>(ell))) throw ParseError("/ell", std::to_string(ell) + " is not prime");
  std::optional<ModCtx> ctx;
  try {
    ctx.emplace(static_cast<std::uint64_t>(ell), static_cast<int>(level));
  } catch (const InputError& e) {
    throw ParseError("/level", e.what());
  }
  const json& kind = field(j, "kind", "");
  if (!kind.is_string() || (kind != "linear" && kind != "affine"))
    throw ParseError("/kind", "expected \"linear\" or \"affine\"");
  const json& gens = array_of(field(j, "generators", ""), 0, "/generators");
  if (gens.empty()) throw ParseError("/generators", "generator list is empty");
  if (kind == "linear") {
    std::vector<ModMat> ms;
    for (std::size_t i = 0; i < gens.size(); ++i) ms.push_back(matrix(*ctx, gens[i], "/generators/" + std::to_string(i)));
    return SubgroupSpec::linear(*ctx, std::move(ms));
  }
  std::vector<AffineElement> es;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string where = "/generators/" + std::to_string(i);
    ModMat g = matrix(*ctx, field(gens[i], "matrix", where), where + "/matrix");
    ModVec v = gens[i].contains("translation") ? vector2(*ctx, gens[i]["translation"], where + "/translation")
                                               : ModVec(*ctx);
    es.emplace_back(std::move(v), std::move(g));
  }
  return SubgroupSpec::affine(*ctx, std::move(es));
}

SubgroupSpec load_group_file(const std::string& path) { return parse_group(read_json_file(path)); }

json group_to_json(const SubgroupSpec& spec) {
  json gens = json::array();
  for (const auto& e : spec.generators()) {
    if (spec.kind() == GroupKind::linear)
      gens.push_back(matrix_json(e.g));
    else
      gens.push_back({{"matrix", matrix_json(e.g)}, {"translation", json::array({e.v[0], e.v[1]})}});
  }
  return {{"ell", spec.ctx().ell()},
          {"level", spec.ctx().level()},
          {"kind", to_string(spec.kind())},
          {"generators", gens}};
}

mpq_class parse_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return mpq_class(mpz_class(std::to_string(j.get<std::int64_t>())));
  if (!j.is_string()) throw ParseError(where, "expected an integer or a \"p/q\" string");
  const std::string s = j.get<std::string>();
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0) throw ParseError(where, "\"" + s + "\" is not a rational number");
  if (sgn(q.get_den()) == 0) throw ParseError(where, "zero denominator");
  q.canonicalize();
  return q;
}

std::string rational_string(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

json rational_json(const mpq_class& q) { return {{"exact", rational_string(q)}, {"decimal", q.get_d()}}; }

mpq_class rational_from_json(const json& j, const std::string& where) {
  return parse_rational(field(j, "exact", where), where + "/exact");
}

CurveInput parse_curve(const json& j) {
  const json& a = array_of(field(j, "a", ""), 5, "/a");
  std::array<mpq_class, 5> coeffs;
  for (std::size_t i = 0; i < 5; ++i) coeffs[i] = parse_rational(a[i], "/a/" + std::to_string(i));
  const json& pt = array_of(field(j, "point", ""), 2, "/point");
  try {
    ecq::CurveQ E = ecq::make_curve_q(coeffs);
    ecq::PointQ P = ecq::make_point_q(E, parse_rational(pt[0], "/point/0"), parse_rational(pt[1], "/point/1"));
    return {std::move(E), std::move(P)};
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    throw ParseError(std::string(e.what()).rfind("singular", 0) == 0 ? "/a" : "/point", e.what());
  }
}

CurveInput load_curve_file(const std::string& path) { return parse_curve(read_json_file(path)); }

json curve_to_json(const ecq::CurveQ& E, const ecq::PointQ& P) {
  json a = json::array();
  for (const auto& c : E.coefficients()) a.push_back(c.get_str());
  return {{"a", a}, {"point", json::array({P.x.get_str(), P.y.get_str()})}};
}

void to_json(json& j, const BoundReport& r) {
  j = {{"ell", r.params.ell},
       {"d", r.params.d},
       {"r", r.params.r},
       {"s", r.params.s},
       {"n_ell", r.params.n_ell},
       {"index", r.params.index},
       {"level", r.level},
       {"bound", r.bound.get_str()},
       {"r_saturated", r.r_saturated},
       {"s_saturated", r.s_saturated}};
}

void from_json(const json& j, BoundReport& r) {
  r.params.ell = u64(j, "ell");
  r.params.d = field(j, "d", "").get<int>();
  r.params.r = field(j, "r", "").get<int>();
  r.params.s = field(j, "s", "").get<int>();
  r.params.n_ell = field(j, "n_ell", "").get<int>();
  r.params.index = u64(j, "index");
  r.level = field(j, "level", "").get<int>();
  if (r.bound.set_str(field(j, "bound", "").get<std::string>(), 10) != 0) throw ParseError("/bound", "not an integer");
  r.r_saturated = field(j, "r_saturated", "").get<bool>();
  r.s_saturated = field(j, "s_saturated", "").get<bool>();
}

void to_json(json& j, const H1Result& r) {
  j = {{"ell", r.ell},           {"module_level", r.module_level}, {"group_level", r.group_level},
       {"group_order", r.group_order}, {"factors", r.factors},     {"exponent", r.exponent},
       {"sah_bound", r.sah_bound},     {"log_z1", r.log_z1},       {"log_b1", r.log_b1}};
}

void from_json(const json& j, H1Result& r) {
  r.ell = u64(j, "ell");
  r.module_level = field(j, "module_level", "").get<int>();
  r.group_level = field(j, "group_level", "").get<int>();
  r.group_order = u64(j, "group_order");
  r.factors = field(j, "factors", "").get<std::vector<std::uint64_t>>();
  r.exponent = u64(j, "exponent");
  r.sah_bound = u64(j, "sah_bound");
  r.log_z1 = field(j, "log_z1", "").get<int>();
  r.log_b1 = field(j, "log_b1", "").get<int>();
}

void to_json(json& j, const H1Tower& t) { j = {{"levels", t.levels}, {"results", t.results}, {"constant", t.constant}}; }

void from_json(const json& j, H1Tower& t) {
  t.levels = field(j, "levels", "").get<std::vector<int>>();
  t.results = field(j, "results", "").get<std::vector<H1Result>>();
  t.constant = field(j, "constant", "").get<bool>();
}

void to_json(json& j, const FixFractionReport& r) {
  json fr = json::array();
  for (const auto& f : r.fractions) fr.push_back(rational_json(f));
  j = {{"ell", r.ell},
       {"image", r.image},
       {"levels", r.levels},
       {"fractions", fr},
       {"nonincreasing", r.nonincreasing},
       {"closed_form", r.closed_form ? rational_json(*r.closed_form) : json(nullptr)},
       {"above_closed_form", r.above_closed_form}};
}

void from_json(const json& j, FixFractionReport& r) {
  r.ell = u64(j, "ell");
  r.image = field(j, "image", "").get<std::string>();
  r.levels = field(j, "levels", "").get<std::vector<int>>();
  r.fractions.clear();
  const json& fr = field(j, "fractions", "");
  for (std::size_t i = 0; i < fr.size(); ++i) r.fractions.push_back(rational_from_json(fr[i], "/fractions/" + std::to_string(i)));
  r.nonincreasing = field(j, "nonincreasing", "").get<bool>();
  const json& cf = field(j, "closed_form", "");
  r.closed_form = cf.is_null() ? std::nullopt : std::optional<mpq_class>(rational_from_json(cf, "/closed_form"));
  r.above_closed_form = field(j, "above_closed_form", "").get<bool>();
}

namespace ecq {

void to_json(json& j, const PointQ& P) {
  j = P.infinity ? json(nullptr) : json::array({rational_string(P.x), rational_string(P.y)});
}

void from_json(const json& j, PointQ& P) {
  if (j.is_null()) {
    P = PointQ::at_infinity();
    return;
  }
  array_of(j, 2, "point");
  P = PointQ::affine(parse_rational(j[0], "point/0"), parse_rational(j[1], "point/1"));
}

void to_json(json& j, const ScanResult& r) {
  j = {{"ell", r.ell},         {"limit", r.limit},     {"good", r.good},
       {"coprime", r.coprime}, {"skipped", r.skipped}, {"fraction", rational_json(r.fraction)}};
}

void from_json(const json& j, ScanResult& r) {
  r.ell = u64(j, "ell");
  r.limit = u64(j, "limit");
  r.good = u64(j, "good");
  r.coprime = u64(j, "coprime");
  r.skipped = u64(j, "skipped");
  r.fraction = rational_from_json(field(j, "fraction", ""), "/fraction");
  r.records.clear();
}

void to_json(json& j, const DivisionReport& r) {
  j = {{"ell", r.ell},     {"d", r.d}, {"torsion", r.torsion}, {"chain", r.chain}, {"rational_torsion", r.rational_torsion},
       {"depth_capped", r.depth_capped}};
}

void from_json(const json& j, DivisionReport& r) {
  r.ell = u64(j, "ell");
  r.d = field(j, "d", "").get<int>();
  r.torsion = field(j, "torsion", "").get<PointQ>();
  r.chain = field(j, "chain", "").get<std::vector<PointQ>>();
  r.rational_torsion = field(j, "rational_torsion", "").get<std::vector<PointQ>>();
  r.depth_capped = field(j, "depth_capped", "").get<bool>();
}

}  // namespace ecq

}  // namespace arbor
