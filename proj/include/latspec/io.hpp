#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "latspec/bounds.hpp"
#include "latspec/constructions.hpp"
#include "latspec/discrepancy.hpp"
#include "latspec/errors.hpp"
#include "latspec/lattice.hpp"
#include "latspec/rational.hpp"
#include "latspec/reduction.hpp"
#include "latspec/volume.hpp"

namespace latspec::io {

using Json = nlohmann::ordered_json;

// Integers go out as JSON numbers when they fit in 64 bits, else as strings.
inline Json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

inline Json rational_json(const Rational& q) { return to_string(q); }

template <class V>
Json vector_json(const V& v) {
  Json a = Json::array();
  for (const auto& x : v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Rational>)
      a.push_back(rational_json(x));
    else
      a.push_back(integer_json(x));
  }
  return a;
}

inline Integer parse_integer_json(const Json& j, const char* what) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
  if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()));
  if (j.is_string()) {
    const auto q = parse_rational(j.get<std::string>());
    if (!is_integer(q)) throw ParseError(std::string(what) + ": expected an integer");
    return q.get_num();
  }
  throw ParseError(std::string(what) + ": expected an integer");
}

inline Rational parse_rational_json(const Json& j, const char* what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer() || j.is_number_unsigned()) return Rational(parse_integer_json(j, what));
  throw ParseError(std::string(what) + ": expected a \"p/q\" string");
}

inline Json lattice_json(const IntegrationLattice& l) {
  Json j;
  j["dim"] = l.dim();
  if (const auto& r = l.rank1()) {
    j["kind"] = "rank1";
    j["n"] = integer_json(r->n);
    j["generator"] = vector_json(r->generator);
    return j;
  }
  j["kind"] = "basis";
  j["n"] = integer_json(l.n_points());
  Json rows = Json::array();
  for (std::size_t i = 0; i < l.basis().rows(); ++i) rows.push_back(vector_json(l.basis().row_vector(i)));
  j["basis"] = rows;
  return j;
}

inline IntegrationLattice lattice_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw ParseError("lattice: expected a JSON object");
    if (!j.contains("dim") || !j.contains("kind")) throw ParseError("lattice: missing \"dim\" or \"kind\"");
    if (!j["dim"].is_number_unsigned() || j["dim"].get<std::uint64_t>() == 0)
      throw ParseError("lattice: \"dim\" must be a positive integer");
    const auto d = static_cast<std::size_t>(j["dim"].get<std::uint64_t>());
    const auto kind = j["kind"].get<std::string>();
    if (kind == "rank1") {
      if (!j.contains("n") || !j.contains("generator") || !j["generator"].is_array())
        throw ParseError("lattice: rank1 needs \"n\" and \"generator\"");
      IntegerVector g;
      for (const auto& x : j["generator"]) g.push_back(parse_integer_json(x, "generator"));
      if (g.size() != d) throw ParseError("lattice: generator length does not match \"dim\"");
      return IntegrationLattice::from_rank1(parse_integer_json(j["n"], "n"), g);
    }
    if (kind == "basis") {
      if (!j.contains("basis") || !j["basis"].is_array()) throw ParseError("lattice: basis kind needs \"basis\"");
      std::vector<RationalVector> rows;
      for (const auto& r : j["basis"]) {
        if (!r.is_array()) throw ParseError("lattice: basis rows must be arrays");
        RationalVector row;
        for (const auto& x : r) row.push_back(parse_rational_json(x, "basis"));
        if (row.size() != d) throw ParseError("lattice: basis row length does not match \"dim\"");
        rows.push_back(std::move(row));
      }
      if (rows.size() != d) throw ParseError("lattice: basis must have \"dim\" rows");
      auto l = IntegrationLattice::from_basis(RationalMatrix::from_rows(rows));
      if (j.contains("n") && parse_integer_json(j["n"], "n") != l.n_points())
        throw ParseError("lattice: \"n\" does not match the basis determinant");
      return l;
    }
    throw ParseError("lattice: unknown kind \"" + kind + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("lattice: ") + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("lattice: ") + e.what());
  } catch (const std::domain_error& e) {
    throw ParseError(std::string("lattice: ") + e.what());
  }
}

inline IntegrationLattice read_lattice_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open lattice file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return lattice_from_json(j);
}

inline Json spectral_json(const SpectralResult& s) {
  Json j;
  j["sigma_sq"] = rational_json(s.sigma_sq);
  j["sigma_decimal"] = s.sigma_decimal;
  j["shortest_dual_sq"] = rational_json(s.shortest_dual_sq);
  j["shortest_dual_vector"] = vector_json(s.shortest_dual_vector);
  return j;
}

inline Json points_json(const PointSet& p) {
  Json j;
  j["dim"] = p.dim();
  j["size"] = p.size();
  j["denominator"] = p.denominator();
  Json pts = Json::array();
  for (std::size_t i = 0; i < p.size(); ++i) pts.push_back(vector_json(p.point(i)));
  j["points"] = pts;
  return j;
}

inline Json body_json(const ConvexBody& c) {
  Json j;
  if (const auto* h = std::get_if<Halfspace>(&c)) {
    j["type"] = "halfspace";
    j["normal"] = vector_json(h->normal);
    j["offset"] = rational_json(h->offset);
    j["closed"] = h->closed;
  } else if (const auto* s = std::get_if<Slab>(&c)) {
    j["type"] = "slab";
    j["normal"] = vector_json(s->normal);
    j["lo"] = rational_json(s->lo);
    j["hi"] = rational_json(s->hi);
    j["open"] = s->open;
  } else {
    const auto& b = std::get<AxisBox>(c);
    j["type"] = "box";
    j["lo"] = vector_json(b.lo);
    j["hi"] = vector_json(b.hi);
    j["open"] = b.open;
  }
  return j;
}

inline Json slab_json(const SlabCertificate& c) {
  Json j;
  j["body"] = body_json(c.body);
  j["points_inside"] = c.points_inside;
  j["points_checked"] = c.points_checked;
  j["volume"] = rational_json(c.volume_lb);
  j["implied_jn_lb"] = rational_json(c.implied_jn_lb);
  j["center_value"] = rational_json(c.center_value);
  j["volume_guarantee_applies"] = c.volume_guarantee_applies;
  return j;
}

inline Json planes_json(const HyperplaneCountCertificate& c) {
  Json j;
  j["normal"] = vector_json(c.normal);
  j["n_points"] = c.n_points;
  j["max_count"] = c.max_count;
  j["max_plane"] = integer_json(c.max_plane);
  j["implied_jn_lb"] = rational_json(c.implied_jn_lb);
  j["pigeonhole_lhs"] = rational_json(c.pigeonhole_lhs());
  j["sigma_sq"] = rational_json(c.sigma_sq);
  j["pigeonhole_holds"] = c.pigeonhole_holds;
  j["plane_limit"] = integer_json(c.plane_limit);
  j["plane_count_consistent"] = c.plane_count_consistent;
  Json counts = Json::array();
  for (const auto& [k, n] : c.plane_counts) counts.push_back(Json::array({integer_json(k), n}));
  j["plane_counts"] = counts;
  return j;
}

inline Json estimate_json(const DiscrepancyEstimate& e) {
  Json j;
  j["lower_bound"] = rational_json(e.lower_bound);
  if (e.upper_bound_sq) {
    j["upper_bound_sq"] = rational_json(*e.upper_bound_sq);
    j["upper_bound_decimal"] = e.upper_bound_decimal;
  }
  j["consistent"] = e.consistent();
  j["evaluations"] = e.evaluations;
  j["budget"] = e.budget;
  j["seed"] = e.seed;
  Json w = Json::array();
  for (const auto& x : e.witnesses) {
    Json o;
    o["source"] = x.source;
    o["local"] = rational_json(x.local);
    o["body"] = body_json(x.body);
    w.push_back(o);
  }
  j["witnesses"] = w;
  return j;
}

inline Json verdicts_json(const std::vector<Verdict>& checks) {
  Json a = Json::array();
  for (const auto& v : checks) a.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  return a;
}

inline Json report_json(const BoundsReport& r) {
  Json j;
  j["name"] = r.name;
  j["d"] = r.d;
  j["n"] = integer_json(r.n);
  j["sigma"] = spectral_json(r.sigma);
  if (!r.sigma_exact.empty()) j["sigma_exact"] = r.sigma_exact;
  j["minkowski_lb_on_sigma"] = r.minkowski_lb_on_sigma;
  j["theorem1_lb_on_jn"] = r.theorem1_lb_on_jn;
  j["theorem2_lb_on_jn"] = r.theorem2_lb_on_jn;
  j["theorem2_ub_on_jn"] = r.theorem2_ub_on_jn;
  j["certified_jn_lb"] = rational_json(r.certified_jn_lb);
  j["certified_jn_lb_decimal"] = r.certified_jn_lb_decimal;
  j["optimal_rate_reference"] = r.optimal_rate_reference;
  j["dimension_free_constants"] = r.dimension_free_constants;
  j["checks"] = verdicts_json(r.checks);
  j["all_pass"] = r.all_pass();
  return j;
}

// CSV fields are quoted only when they contain a separator or quote.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\n";
}

inline std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

template <class V>
std::string vector_string(const V& v) {
  std::vector<std::string> parts;
  for (const auto& x : v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Rational>)
      parts.push_back(to_string(x));
    else
      parts.push_back(x.get_str());
  }
  return "(" + join(parts, " ") + ")";
}

inline std::vector<std::string> verify_csv_header() {
  return {"name", "d", "N", "sigma_sq", "sigma_exact", "sigma", "minkowski_lb", "th1_lb", "th2_lb", "th2_ub",
          "certified_jn_lb", "certified_jn_lb_decimal", "optimal_rate_reference", "all_pass", "verdicts"};
}

inline std::vector<std::string> verify_csv_fields(const BoundsReport& r) {
  std::vector<std::string> verdicts;
  for (const auto& v : r.checks) verdicts.push_back(v.name + "=" + (v.pass ? "pass" : "fail"));
  return {r.name,
          std::to_string(r.d),
          r.n.get_str(),
          to_string(r.sigma.sigma_sq),
          r.sigma_exact,
          r.sigma.sigma_decimal,
          r.minkowski_lb_on_sigma,
          r.theorem1_lb_on_jn,
          r.theorem2_lb_on_jn,
          r.theorem2_ub_on_jn,
          to_string(r.certified_jn_lb),
          r.certified_jn_lb_decimal,
          r.optimal_rate_reference,
          r.all_pass() ? "true" : "false",
          join(verdicts, ";")};
}

inline std::vector<std::string> search_csv_header() {
  return {"n", "d", "kind", "generator", "sigma_sq", "sigma_decimal", "empirical_constant", "candidates"};
}

inline std::vector<std::string> search_csv_fields(const GeneratorSearchResult& r, int digits = kDefaultDigits) {
  const auto s = sqrt_of(r.best_sigma_sq, bits_for_digits(digits), MPFR_RNDN).to_string(std::max(digits, 30));
  return {std::to_string(r.n), std::to_string(r.dim), to_string(r.kind), vector_string(r.best_generator),
          to_string(r.best_sigma_sq), s, r.empirical_constant, std::to_string(r.candidates)};
}

inline Json search_json(const GeneratorSearchResult& r, int digits = kDefaultDigits) {
  Json j;
  j["n"] = r.n;
  j["d"] = r.dim;
  j["kind"] = to_string(r.kind);
  j["generator"] = vector_json(r.best_generator);
  j["sigma_sq"] = rational_json(r.best_sigma_sq);
  j["sigma_decimal"] = sqrt_of(r.best_sigma_sq, bits_for_digits(digits), MPFR_RNDN).to_string(std::max(digits, 30));
  j["empirical_constant"] = r.empirical_constant;
  j["candidates"] = r.candidates;
  return j;
}

}  // namespace latspec::io
