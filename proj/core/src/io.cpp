#include "tfc/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tfc::io {

using nlohmann::json;

namespace {

std::string strip_ws(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

json term_to_json_obj(const EdsTerm& t) {
  return json{{"m", t.m},          {"U", t.U.get_str()}, {"V", t.V.get_str()},
              {"W", t.W.get_str()}, {"A", t.A.get_str()}, {"B", t.B.get_str()},
              {"C", t.C.get_str()}};
}

EdsTerm term_from_json_obj(const json& j) {
  EdsTerm t;
  t.m = j.at("m").get<unsigned long>();
  t.U = parse_integer(j.at("U").get<std::string>());
  t.V = parse_integer(j.at("V").get<std::string>());
  t.W = parse_integer(j.at("W").get<std::string>());
  t.A = parse_integer(j.at("A").get<std::string>());
  t.B = parse_integer(j.at("B").get<std::string>());
  t.C = parse_integer(j.at("C").get<std::string>());
  return t;
}

json point_to_json_obj(const CubicPoint& p) {
  if (p.is_identity()) return json{{"identity", true}};
  return json{{"u", rational_str(p.u())}, {"v", rational_str(p.v())}};
}

}  // namespace

mpq_class parse_rational(const std::string& s) {
  const std::string t = strip_ws(s);
  if (t.empty()) throw std::invalid_argument("empty rational literal");
  mpq_class q;
  if (q.set_str(t, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  if (q.get_den() == 0)
    throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

mpz_class parse_integer(const std::string& s) {
  const std::string t = strip_ws(s);
  mpz_class n;
  if (t.empty() || n.set_str(t, 10) != 0)
    throw std::invalid_argument("bad integer literal: " + s);
  return n;
}

CubicPoint parse_point(const std::string& s) {
  const std::string t = strip_ws(s);
  if (t == "identity") return CubicPoint::identity();
  const auto comma = t.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("point literal must be \"u,v\": " + s);
  return CubicPoint(parse_rational(t.substr(0, comma)),
                    parse_rational(t.substr(comma + 1)));
}

std::string rational_str(const mpq_class& q) { return q.get_str(); }

void save_cache(EdsContext& ctx, unsigned long max_m, const std::string& path) {
  json header{{"schema", kSchemaVersion},
              {"d", ctx.curve().d().get_str()},
              {"P", point_to_json_obj(ctx.generator())}};
  std::ostringstream body;
  body << header.dump() << "\n";
  for (unsigned long m = 1; m <= max_m; ++m)
    body << term_to_json_obj(ctx.term(m)).dump() << "\n";

  // Write-temp-then-rename keeps readers from seeing a half-written cache.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << body.str();
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

CacheFile load_cache(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read cache " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("empty cache " + path);

  CacheFile out;
  try {
    const json header = json::parse(line);
    if (header.at("schema").get<int>() != kSchemaVersion)
      throw std::invalid_argument("unsupported cache schema");
    out.d = parse_integer(header.at("d").get<std::string>());
    const json& p = header.at("P");
    if (p.contains("identity")) {
      out.generator = CubicPoint::identity();
    } else {
      out.generator = CubicPoint(parse_rational(p.at("u").get<std::string>()),
                                 parse_rational(p.at("v").get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed cache header: " +
                                std::string(e.what()));
  }

  unsigned long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (strip_ws(line).empty()) continue;
    EdsTerm t;
    try {
      t = term_from_json_obj(json::parse(line));
    } catch (const json::exception& e) {
      throw std::invalid_argument("malformed cache record at line " +
                                  std::to_string(lineno) + ": " + e.what());
    }
    out.terms.push_back(std::move(t));
  }

  // Indices must be exactly 1..n: gaps or duplicates mean the file no
  // longer is what generate wrote.
  for (std::size_t i = 0; i < out.terms.size(); ++i) {
    if (out.terms[i].m != i + 1)
      throw inconsistency_error(
          "cache violates contiguous indexing at record " +
          std::to_string(i + 1) + " (found m = " +
          std::to_string(out.terms[i].m) + ")");
  }
  for (const EdsTerm& t : out.terms) validate_term(t, out.d);
  return out;
}

std::string point_json(const CubicPoint& p) {
  return point_to_json_obj(p).dump();
}

std::string point_json(const WeierstrassPoint& p) {
  if (p.is_identity()) return json{{"identity", true}}.dump();
  return json{{"x", rational_str(p.x())}, {"y", rational_str(p.y())}}.dump();
}

std::string term_json(const EdsTerm& t) { return term_to_json_obj(t).dump(); }

std::string certificate_json(const PowerCertificate& cert) {
  json j{{"schema", kSchemaVersion},
         {"ord2_w1", cert.ord2_w1},
         {"finiteness_applicable", cert.finiteness_applicable},
         {"even_bound_applicable", cert.even_bound_applicable},
         {"divisibility_applicable", cert.divisibility_applicable},
         {"no_powers_possible", cert.no_powers_possible()},
         {"notes", cert.notes}};
  j["p0"] = cert.p0 ? json(cert.p0->get_str()) : json(nullptr);
  if (cert.l_bound)
    j["l_bound"] = {{"ord2_w1", cert.l_bound->ord2_w1},
                    {"p0", cert.l_bound->p0.get_str()},
                    {"integer_bound", cert.l_bound->integer_bound().get_str()}};
  else
    j["l_bound"] = nullptr;
  if (cert.allowed_l)
    j["allowed_l"] = *cert.allowed_l;
  else
    j["allowed_l"] = nullptr;
  return j.dump();
}

std::string scan_json(const ScanResult& scan) {
  json hits = json::array();
  for (const auto& h : scan.hits)
    hits.push_back(
        {{"m", h.m}, {"l", h.l}, {"root", h.root.get_str()}});
  return json{{"schema", kSchemaVersion},
              {"max_m", scan.max_m},
              {"unit_terms", scan.unit_terms},
              {"hits", hits}}
      .dump();
}

std::string law_report_json(const LawReport& rep) {
  return json{{"law", rep.law},
              {"checks", rep.checks},
              {"violations", rep.violations},
              {"notes", rep.notes},
              {"passed", rep.passed()}}
      .dump();
}

std::string frey_json(const FreyCurve& e) {
  return json{{"schema", kSchemaVersion},
              {"a2", e.a2.get_str()},
              {"a4", e.a4.get_str()},
              {"a6", e.a6.get_str()},
              {"disc", e.disc.get_str()}}
      .dump();
}

std::string kraus_json(const KrausData& k) {
  return json{{"schema", kSchemaVersion},
              {"A", k.A.get_str()},
              {"B", k.B.get_str()},
              {"C", k.C.get_str()},
              {"x", k.x.get_str()},
              {"y", k.y.get_str()},
              {"z", k.z.get_str()},
              {"l", k.l},
              {"R", k.R.get_str()},
              {"alpha", k.alpha},
              {"beta", k.beta},
              {"conductor", k.conductor.get_str()},
              {"level", k.level.get_str()},
              {"valuations_verified", k.valuations_verified},
              {"notes", k.notes}}
      .dump();
}

std::string descent_json(const DescentSolution& sol) {
  return json{{"schema", kSchemaVersion},
              {"s", sol.s},
              {"a", sol.a.get_str()},
              {"b", sol.b.get_str()},
              {"e", sol.e},
              {"f", sol.f},
              {"g", sol.g},
              {"A", sol.A.get_str()},
              {"B", sol.B.get_str()},
              {"C", sol.C.get_str()},
              {"d", sol.d.get_str()}}
      .dump();
}

std::string aux_scan_json(const AuxScanResult& res) {
  json pts = json::array();
  for (const auto& p : res.points) {
    json pt{{"x", rational_str(p.x)}, {"y", rational_str(p.y)}};
    if (p.z) pt["z"] = rational_str(*p.z);
    pts.push_back(pt);
  }
  return json{{"schema", kSchemaVersion},
              {"curve", aux_curve_name(res.curve)},
              {"height_bound", res.height_bound},
              {"conclusive", res.conclusive},
              {"note", "naive scan; absence of points is not a proof"},
              {"points", pts}}
      .dump();
}

}  // namespace tfc::io
