#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "latspec/bounds.hpp"
#include "latspec/constructions.hpp"
#include "latspec/discrepancy.hpp"
#include "latspec/errors.hpp"
#include "latspec/io.hpp"
#include "latspec/lattice.hpp"
#include "latspec/reduction.hpp"

namespace latspec::cli {

enum ExitCode : int { kOk = 0, kVerdictFailed = 1, kMalformed = 2, kCapExceeded = 3, kInvariant = 4 };

struct RunConfig {
  std::string command;
  // Exactly one lattice source.
  std::string lattice_path;
  std::vector<std::string> rank1;  // {N, "g1,g2,..."}
  std::string family;              // fibonacci | scaled | bad | rank1 | korobov
  std::string m_range;             // "a" or "a..b"
  std::size_t d = 2;
  std::string generator;           // for --family rank1
  // search
  std::string n_range;
  std::string kind = "korobov";
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::uint64_t budget = 10000;
  Limits limits;
  int precision = kDefaultDigits;
};

struct NamedLattice {
  std::string name;
  IntegrationLattice lattice;
};

inline std::pair<unsigned long, unsigned long> parse_range(const std::string& text, const char* what) {
  auto number = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError(std::string(what) + ": expected a nonnegative integer or range a..b, got \"" + text + "\"");
    return std::stoul(s);
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto v = number(text);
    return {v, v};
  }
  const auto a = number(text.substr(0, dots));
  const auto b = number(text.substr(dots + 2));
  if (a > b) throw ParseError(std::string(what) + ": empty range " + text);
  return {a, b};
}

inline IntegerVector parse_generator(const std::string& text) {
  IntegerVector g;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto q = parse_rational(part);
    if (!is_integer(q)) throw ParseError("generator: entries must be integers, got \"" + part + "\"");
    g.push_back(q.get_num());
  }
  if (g.empty()) throw ParseError("generator: empty list");
  return g;
}

inline std::vector<NamedLattice> read_lattices(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open lattice file " + path);
  io::Json j;
  try {
    j = io::Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  std::vector<NamedLattice> out;
  if (j.is_object() && j.contains("lattices")) {
    if (!j["lattices"].is_array()) throw ParseError(path + ": \"lattices\" must be an array");
    for (std::size_t i = 0; i < j["lattices"].size(); ++i) {
      const auto& e = j["lattices"][i];
      std::string name = e.is_object() && e.contains("name") && e["name"].is_string()
                             ? e["name"].get<std::string>()
                             : path + "[" + std::to_string(i) + "]";
      out.push_back({name, io::lattice_from_json(e)});
    }
    return out;
  }
  std::string name = j.is_object() && j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : path;
  out.push_back({name, io::lattice_from_json(j)});
  return out;
}

inline std::vector<NamedLattice> collect_lattices(const RunConfig& c) {
  const int sources = !c.lattice_path.empty() + !c.rank1.empty() + !c.family.empty();
  if (sources != 1) throw ParseError("exactly one of --lattice, --rank1, --family is required");
  if (!c.lattice_path.empty()) return read_lattices(c.lattice_path);
  if (!c.rank1.empty()) {
    if (c.rank1.size() != 2) throw ParseError("--rank1 expects N and a generator list");
    const auto nq = parse_rational(c.rank1[0]);
    if (!is_integer(nq) || nq <= 0) throw ParseError("--rank1: N must be a positive integer");
    const auto g = parse_generator(c.rank1[1]);
    return {{"rank1(" + c.rank1[0] + ";" + c.rank1[1] + ")", IntegrationLattice::from_rank1(nq.get_num(), g)}};
  }
  if (c.m_range.empty()) throw ParseError("--family needs --m");
  const auto [lo, hi] = parse_range(c.m_range, "--m");
  const std::string dtag = ",d=" + std::to_string(c.d);
  std::vector<NamedLattice> out;
  for (unsigned long m = lo; m <= hi; ++m) {
    const std::string mtag = "(m=" + std::to_string(m);
    if (c.family == "fibonacci") {
      out.push_back({"fibonacci" + mtag + ")", fibonacci_lattice(m)});
    } else if (c.family == "scaled") {
      out.push_back({"scaled" + mtag + dtag + ")", scaled_integer_lattice(m, c.d)});
    } else if (c.family == "bad") {
      out.push_back({"bad" + mtag + dtag + ")", bad_lattice(m, c.d)});
    } else if (c.family == "rank1") {
      if (c.generator.empty()) throw ParseError("--family rank1 needs --generator");
      const auto g = parse_generator(c.generator);
      out.push_back({"rank1(" + std::to_string(m) + ";" + c.generator + ")",
                     IntegrationLattice::from_rank1(Integer(m), g)});
    } else if (c.family == "korobov") {
      if (!is_prime(Integer(m))) continue;
      const auto best = korobov_search(m, c.d, SearchKind::korobov, c.limits);
      out.push_back({"korobov(n=" + std::to_string(m) + dtag + ")",
                     IntegrationLattice::from_rank1(Integer(m), best.best_generator)});
    } else {
      throw ParseError("unknown family \"" + c.family + "\"");
    }
  }
  if (out.empty()) throw ParseError("family produced no lattices");
  return out;
}

inline io::Json header_json(const RunConfig& c) {
  io::Json h;
  h["tool"] = "latspec";
  h["command"] = c.command;
  h["seed"] = c.seed;
  h["budget"] = c.budget;
  h["precision"] = c.precision;
  h["enumeration_cap"] = c.limits.enumeration_cap;
  h["svp_dimension_cap"] = c.limits.svp_dimension_cap;
  h["search_cap"] = c.limits.search_cap;
  return h;
}

inline std::string header_comment(const RunConfig& c) {
  std::ostringstream s;
  s << "# latspec command=" << c.command << " seed=" << c.seed << " budget=" << c.budget
    << " precision=" << c.precision << " enumeration_cap=" << c.limits.enumeration_cap
    << " svp_dimension_cap=" << c.limits.svp_dimension_cap << " search_cap=" << c.limits.search_cap << "\n";
  return s.str();
}

namespace detail {

struct Output {
  std::string text;
  bool all_pass = true;
};

inline Output spectral(const RunConfig& c, bool csv) {
  Output o;
  io::Json results = io::Json::array();
  if (csv) o.text += io::csv_row({"name", "d", "N", "sigma_sq", "sigma_decimal", "shortest_dual_sq", "shortest_dual_vector"});
  for (const auto& [name, l] : collect_lattices(c)) {
    const auto s = spectral_test(l, c.limits, c.precision);
    if (csv) {
      o.text += io::csv_row({name, std::to_string(l.dim()), l.n_points().get_str(), to_string(s.sigma_sq),
                             s.sigma_decimal, to_string(s.shortest_dual_sq),
                             io::vector_string(s.shortest_dual_vector)});
    } else {
      io::Json r;
      r["name"] = name;
      r["lattice"] = io::lattice_json(l);
      r["spectral"] = io::spectral_json(s);
      results.push_back(r);
    }
  }
  if (!csv) o.text = io::Json{{"header", header_json(c)}, {"results", results}}.dump(2) + "\n";
  return o;
}

inline Output points(const RunConfig& c, bool csv) {
  Output o;
  io::Json results = io::Json::array();
  if (csv) o.text += io::csv_row({"name", "index", "point"});
  for (const auto& [name, l] : collect_lattices(c)) {
    const auto p = l.enumerate_points(c.limits);
    if (csv) {
      for (std::size_t i = 0; i < p.size(); ++i)
        o.text += io::csv_row({name, std::to_string(i), io::vector_string(p.point(i))});
    } else {
      io::Json r;
      r["name"] = name;
      r["lattice"] = io::lattice_json(l);
      r["points"] = io::points_json(p);
      results.push_back(r);
    }
  }
  if (!csv) o.text = io::Json{{"header", header_json(c)}, {"results", results}}.dump(2) + "\n";
  return o;
}

inline Output certify(const RunConfig& c, bool csv) {
  Output o;
  io::Json results = io::Json::array();
  if (csv)
    o.text += io::csv_row({"name", "d", "N", "sigma_sq", "slab_volume", "max_plane_count", "pigeonhole_holds",
                           "certified_jn_lb", "certified_jn_lb_decimal", "upper_bound_decimal", "evaluations",
                           "consistent"});
  const auto bits = bits_for_digits(c.precision);
  for (const auto& [name, l] : collect_lattices(c)) {
    const auto spec = spectral_test(l, c.limits, c.precision);
    const auto pts = l.enumerate_points(c.limits);
    const auto slab = slab_certificate(spec, pts);
    const auto planes = hyperplane_count_certificate(spec, pts);
    const auto est = estimate_isotropic_discrepancy(pts, c.budget, c.seed, LatticeContext{spec, true});
    const bool pass = slab.points_inside == 0 && planes.pigeonhole_holds && est.consistent();
    o.all_pass = o.all_pass && pass;
    const auto lb_dec = BigFloat::from(est.lower_bound, bits, MPFR_RNDD).to_string(c.precision, MPFR_RNDD);
    if (csv) {
      o.text += io::csv_row({name, std::to_string(l.dim()), l.n_points().get_str(), to_string(spec.sigma_sq),
                             to_string(slab.volume_lb), std::to_string(planes.max_count),
                             planes.pigeonhole_holds ? "true" : "false", to_string(est.lower_bound), lb_dec,
                             est.upper_bound_decimal, std::to_string(est.evaluations),
                             est.consistent() ? "true" : "false"});
    } else {
      io::Json r;
      r["name"] = name;
      r["lattice"] = io::lattice_json(l);
      r["spectral"] = io::spectral_json(spec);
      r["slab_certificate"] = io::slab_json(slab);
      r["hyperplane_count_certificate"] = io::planes_json(planes);
      r["estimate"] = io::estimate_json(est);
      r["certified_jn_lb"] = to_string(est.lower_bound);
      r["certified_jn_lb_decimal"] = lb_dec;
      r["all_pass"] = pass;
      results.push_back(r);
    }
  }
  if (!csv) o.text = io::Json{{"header", header_json(c)}, {"results", results}}.dump(2) + "\n";
  return o;
}

inline Output search(const RunConfig& c, bool csv) {
  if (c.n_range.empty()) throw ParseError("search needs --n");
  SearchKind kind;
  if (c.kind == "korobov")
    kind = SearchKind::korobov;
  else if (c.kind == "exhaustive")
    kind = SearchKind::exhaustive;
  else
    throw ParseError("unknown search kind \"" + c.kind + "\"");
  const auto [lo, hi] = parse_range(c.n_range, "--n");
  Output o;
  io::Json results = io::Json::array();
  if (csv) o.text += io::csv_row(io::search_csv_header());
  for (unsigned long n = std::max(lo, 2ul); n <= hi; ++n) {
    if (!is_prime(Integer(n))) continue;
    const auto r = korobov_search(n, c.d, kind, c.limits);
    if (csv)
      o.text += io::csv_row(io::search_csv_fields(r, c.precision));
    else
      results.push_back(io::search_json(r, c.precision));
  }
  if (!csv) o.text = io::Json{{"header", header_json(c)}, {"results", results}}.dump(2) + "\n";
  return o;
}

inline Output verify(const RunConfig& c, bool csv) {
  Output o;
  io::Json results = io::Json::array();
  if (csv) o.text += io::csv_row(io::verify_csv_header());
  for (const auto& [name, l] : collect_lattices(c)) {
    const auto r = verify_lattice(l, c.budget, c.seed, c.limits, c.precision, name);
    o.all_pass = o.all_pass && r.all_pass();
    if (csv) {
      o.text += io::csv_row(io::verify_csv_fields(r));
    } else {
      auto j = io::report_json(r);
      j["lattice"] = io::lattice_json(l);
      results.push_back(j);
    }
  }
  if (!csv) o.text = io::Json{{"header", header_json(c)}, {"results", results}}.dump(2) + "\n";
  return o;
}

inline Output construct(const RunConfig& c, bool csv) {
  if (csv) throw ParseError("construct writes lattice JSON only");
  const auto lattices = collect_lattices(c);
  io::Json j;
  if (lattices.size() == 1) {
    j = io::lattice_json(lattices[0].lattice);
    j["name"] = lattices[0].name;
    j["header"] = header_json(c);
  } else {
    io::Json arr = io::Json::array();
    for (const auto& [name, l] : lattices) {
      auto e = io::lattice_json(l);
      e["name"] = name;
      arr.push_back(e);
    }
    j["header"] = header_json(c);
    j["lattices"] = arr;
  }
  return {j.dump(2) + "\n", true};
}

}  // namespace detail

// Runs one command. Output goes to `out` unless config.output names a file.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.format != "json" && c.format != "csv") throw ParseError("--format must be json or csv");
    if (c.precision < 5 || c.precision > 10000) throw ParseError("--precision must lie in [5, 10000]");
    const bool csv = c.format == "csv";
    detail::Output o;
    if (c.command == "spectral")
      o = detail::spectral(c, csv);
    else if (c.command == "points")
      o = detail::points(c, csv);
    else if (c.command == "certify")
      o = detail::certify(c, csv);
    else if (c.command == "search")
      o = detail::search(c, csv);
    else if (c.command == "verify")
      o = detail::verify(c, csv);
    else if (c.command == "construct")
      o = detail::construct(c, csv);
    else
      throw ParseError("unknown command \"" + c.command + "\"");
    const std::string text = csv ? header_comment(c) + o.text : o.text;
    if (c.output.empty()) {
      out << text;
    } else {
      std::ofstream f(c.output, std::ios::binary);
      if (!f) throw ParseError("cannot write " + c.output);
      f << text;
    }
    return o.all_pass ? kOk : kVerdictFailed;
  } catch (const CapExceeded& e) {
    err << "latspec: cap exceeded: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const InvariantViolation& e) {
    err << "latspec: internal invariant violated: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::invalid_argument& e) {
    err << "latspec: " << e.what() << "\n";
    return kMalformed;
  } catch (const std::domain_error& e) {
    err << "latspec: " << e.what() << "\n";
    return kMalformed;
  }
}

inline int default_precision() {
  const char* env = std::getenv("LATSPEC_PRECISION");
  if (!env || !*env) return kDefaultDigits;
  const std::string s(env);
  if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 5)
    throw ParseError("LATSPEC_PRECISION must be a positive integer");
  return std::stoi(s);
}

inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    c.precision = default_precision();
  } catch (const ParseError& e) {
    err << "latspec: " << e.what() << "\n";
    return kMalformed;
  }
  CLI::App app{"Exact spectral tests, discrepancy certificates and bound checks for integration lattices"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* s, bool needs_lattice) {
    if (needs_lattice) {
      s->add_option("--lattice", c.lattice_path, "Lattice JSON file");
      s->add_option("--rank1", c.rank1, "Rank-1 lattice: N g1,g2,...")->expected(2);
      s->add_option("--family", c.family, "fibonacci | scaled | bad | rank1 | korobov");
      s->add_option("--m", c.m_range, "Family parameter a or range a..b");
      s->add_option("--generator", c.generator, "Generator for --family rank1");
    }
    s->add_option("--d", c.d, "Dimension for scaled, bad, korobov and search")->check(CLI::PositiveNumber);
    s->add_option("--format", c.format, "json | csv");
    s->add_option("-o,--output", c.output, "Output file (default stdout)");
    s->add_option("--seed", c.seed, "Search seed");
    s->add_option("--budget", c.budget, "Discrepancy search budget (volume evaluations)");
    s->add_option("--enumeration-cap", c.limits.enumeration_cap, "Maximum number of enumerated points");
    s->add_option("--svp-cap", c.limits.svp_dimension_cap, "Maximum dimension for exact SVP");
    s->add_option("--search-cap", c.limits.search_cap, "Maximum number of generator candidates");
    s->add_option("--precision", c.precision, "Significant digits (default from LATSPEC_PRECISION or 50)");
  };
  add_common(app.add_subcommand("spectral", "Spectral test sigma(L)"), true);
  add_common(app.add_subcommand("points", "Lattice points in [0,1)^d"), true);
  add_common(app.add_subcommand("certify", "Slab and hyperplane certificates plus discrepancy search"), true);
  add_common(app.add_subcommand("verify", "Bound checks, one row per lattice"), true);
  add_common(app.add_subcommand("construct", "Write lattice JSON"), true);
  auto* search = app.add_subcommand("search", "Best rank-1 generators over a prime range");
  add_common(search, false);
  search->add_option("--n", c.n_range, "Prime range a..b")->required();
  search->add_option("--kind", c.kind, "korobov | exhaustive");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "latspec: " << e.what() << "\n";
    return kMalformed;
  }
  for (auto* s : app.get_subcommands()) c.command = s->get_name();
  return run(c, out, err);
}

}  // namespace latspec::cli
