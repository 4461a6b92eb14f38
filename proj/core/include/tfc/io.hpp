#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "tfc/eds.hpp"
#include "tfc/frey_descent.hpp"
#include "tfc/power_cert.hpp"

namespace tfc::io {

inline constexpr int kSchemaVersion = 1;

// "num/den" or plain "num", whitespace-insensitive, reduced on input.
mpq_class parse_rational(const std::string& s);
mpz_class parse_integer(const std::string& s);

// "u,v" -> affine cubic point; "identity" -> the identity.
CubicPoint parse_point(const std::string& s);

std::string rational_str(const mpq_class& q);

// Sequence cache: one JSON record per line. The header carries the schema
// version, d and the generator; every following line is one term with all
// big integers as decimal strings.
void save_cache(EdsContext& ctx, unsigned long max_m, const std::string& path);

struct CacheFile {
  mpz_class d;
  CubicPoint generator = CubicPoint::identity();
  std::vector<EdsTerm> terms;  // exactly m = 1..terms.size(), ascending
};

// Parses and validates structure (header, contiguous unique indices) plus
// every per-term invariant. Structural damage and invariant violations
// throw inconsistency_error naming the violated law; unreadable files
// throw std::invalid_argument.
CacheFile load_cache(const std::string& path);

// JSON serializations (schema-versioned, decimal strings throughout).
// Points carry {"u","v"} / {"x","y"} rationals; the identity is the tagged
// unit {"identity": true}.
std::string point_json(const CubicPoint& p);
std::string point_json(const WeierstrassPoint& p);
std::string term_json(const EdsTerm& t);
std::string certificate_json(const PowerCertificate& cert);
std::string scan_json(const ScanResult& scan);
std::string law_report_json(const LawReport& rep);
std::string frey_json(const FreyCurve& e);
std::string kraus_json(const KrausData& k);
std::string descent_json(const DescentSolution& sol);
std::string aux_scan_json(const AuxScanResult& res);

}  // namespace tfc::io
