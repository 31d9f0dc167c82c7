#include "symboleo/codegen/generator.hpp"

#include "symboleo/common/error.hpp"
#include "symboleo/core/validator.hpp"

namespace symboleo::codegen
{

namespace
{

std::string path_for(const DomainDecl & d)
{
  switch (d.category) {
    case Category::Role:
      return "roles/" + d.name + ".js";
    case Category::Asset:
      return "assets/" + d.name + ".js";
    case Category::Event:
      return "events/" + d.name + ".js";
  }
  return d.name + ".js";
}

}  // namespace

GeneratedBundle generate(const SymboleoSpec & spec)
{
  const auto diags = validate(spec);
  for (const auto & d : diags) {
    if (d.severity == Severity::Error) {
      throw Error(
        codes::kInvalidSpec, "cannot generate from an invalid spec: " + d.code + " " + d.message);
    }
  }

  GeneratedBundle b;
  b.contract = spec.name;
  for (const auto & d : spec.domain) {
    b.files.emplace(path_for(d), emit_type_class(spec, d));
  }
  b.files.emplace("router.js", emit_router(spec));
  b.files.emplace("contract.js", emit_contract(spec));
  b.manifest = manifest_from_spec(spec);
  nlohmann::json doc = to_json(b.manifest);
  doc["generator"] = {
    {"name", kGeneratorName}, {"version", kGeneratorVersion}, {"source", spec.name}};
  b.files.emplace("manifest.json", doc.dump(2) + "\n");
  return b;
}

LocCount count_loc(const GeneratedBundle & bundle)
{
  LocCount c;
  for (const auto & [path, text] : bundle.files) {
    const std::size_t n = loc::count_loc(text);
    c.per_file.emplace(path, n);
    c.total += n;
  }
  return c;
}

}  // namespace symboleo::codegen
