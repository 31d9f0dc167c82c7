#pragma once

// Shared helpers for loading the transactive-energy fixtures.

#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "symboleo/cnl/refine.hpp"
#include "symboleo/core/parser.hpp"
#include "symboleo/core/printer.hpp"
#include "symboleo/runtime/compiled.hpp"
#include "symboleo/tmpl/template.hpp"

namespace symboleo::testing
{

inline std::string fixtures_dir() { return SYMBOLEO_FIXTURES_DIR; }
inline std::string te_dir() { return fixtures_dir() + "/te"; }

inline std::string slurp(const std::string & path)
{
  std::ifstream in{path, std::ios::binary};
  if (!in) {
    throw std::runtime_error("cannot read " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const std::vector<std::string> & refinement_labels()
{
  static const std::vector<std::string> labels{"R1", "R2", "R3", "R4", "R5", "R1R2", "R1R3", "R4R2", "R4R3"};
  return labels;
}

inline std::string te_source() { return slurp(te_dir() + "/transactive_energy.symboleo"); }

inline SymboleoSpec te_spec()
{
  auto r = parse(te_source());
  if (!r.spec) {
    throw std::runtime_error("TE fixture does not parse");
  }
  return *r.spec;
}

inline tmpl::ContractTemplate te_template()
{
  return tmpl::template_from_json(nlohmann::json::parse(slurp(te_dir() + "/transactive_energy.cttpl.json")));
}

inline tmpl::TemplatePair te_pair()
{
  const auto t = te_template();
  auto b = tmpl::bind_pair(t, te_spec(), tmpl::identity_map(t));
  if (!b.pair) {
    throw std::runtime_error("TE fixture does not bind");
  }
  return *b.pair;
}

inline std::string refinement_script(const std::string & label)
{
  return slurp(te_dir() + "/refinements/" + label + ".cnl");
}

inline cnl::RefinementResult te_refined(const std::string & label)
{
  return cnl::apply_script(te_pair(), cnl::parse_script(refinement_script(label)));
}

inline std::map<std::string, std::string> te_params()
{
  return runtime::params_from_json(nlohmann::json::parse(slurp(te_dir() + "/params.json")));
}

}  // namespace symboleo::testing
