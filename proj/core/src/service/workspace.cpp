#include "symboleo/service/workspace.hpp"

#include <fstream>
#include <sstream>

#include "symboleo/common/error.hpp"
#include "symboleo/core/parser.hpp"
#include "symboleo/core/printer.hpp"
#include "symboleo/runtime/scenario.hpp"

namespace symboleo::service
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

constexpr const char * kTemplate = "tpl";
constexpr const char * kSpec = "spec";
constexpr const char * kPair = "pair";
constexpr const char * kBundle = "bundle";
constexpr const char * kInstance = "inst";

std::string dir_of(const std::string & kind)
{
  if (kind == kTemplate) {
    return "templates";
  }
  if (kind == kInstance) {
    return "instances";
  }
  return kind + "s";
}

[[noreturn]] void not_found(const std::string & what, const std::string & id)
{
  throw Error(codes::kNotFound, "unknown " + what + " '" + id + "'");
}

SymboleoSpec parse_stored(const StoredSpec & s)
{
  auto r = parse(s.text);
  if (!r.spec) {
    throw Error(codes::kInvalidSpec, "spec " + s.id + " does not parse");
  }
  return std::move(*r.spec);
}

json slots_json(const std::map<std::string, tmpl::SlotState> & slots)
{
  json j = json::object();
  for (const auto & [k, v] : slots) {
    j[k] = {{"temporal", v.temporal}, {"conditional", v.conditional}};
  }
  return j;
}

json pair_json(const StoredPair & p)
{
  json history = json::array();
  for (const auto & h : p.history) {
    history.push_back({{"text", h.text}, {"parentSpec", h.parent_spec}, {"spec", h.spec}});
  }
  return {
    {"id", p.id},
    {"version", p.version},
    {"templateId", p.template_id},
    {"baseSpec", p.base_spec},
    {"spec", p.spec},
    {"paramMap", p.param_map},
    {"template", tmpl::to_json(p.pair.tmpl)},
    {"slots", slots_json(p.pair.slots)},
    {"history", history}};
}

json spec_json(const StoredSpec & s)
{
  return {{"id", s.id}, {"text", s.text}, {"parent", s.parent}, {"refinement", s.refinement}, {"pair", s.pair}};
}

json instance_json(const StoredInstance & s)
{
  return {{"id", s.id}, {"spec", s.spec}, {"params", s.params}, {"start", s.start}, {"ops", s.ops}};
}

std::size_t id_number(const std::string & id)
{
  const auto dash = id.rfind('-');
  if (dash == std::string::npos) {
    return 0;
  }
  try {
    return std::stoul(id.substr(dash + 1));
  } catch (const std::exception &) {
    return 0;
  }
}

json read_json(const fs::path & p)
{
  std::ifstream in{p};
  std::stringstream ss;
  ss << in.rdbuf();
  return json::parse(ss.str());
}

}  // namespace

Workspace::Workspace(fs::path dir) : dir_(std::move(dir))
{
  if (!dir_.empty()) {
    load();
  }
}

std::string Workspace::next_id(const std::string & kind)
{
  return kind + "-" + std::to_string(++counters_[kind]);
}

void Workspace::persist(const std::string & kind, const std::string & id, const json & j) const
{
  if (dir_.empty()) {
    return;
  }
  const fs::path d = dir_ / dir_of(kind);
  fs::create_directories(d);
  const fs::path tmp = d / (id + ".json.tmp");
  {
    std::ofstream out{tmp, std::ios::binary | std::ios::trunc};
    out << j.dump(2) << '\n';
    if (!out) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  fs::rename(tmp, d / (id + ".json"));
}

void Workspace::load()
{
  auto each = [&](const std::string & kind, auto && fn) {
    const fs::path d = dir_ / dir_of(kind);
    if (!fs::is_directory(d)) {
      return;
    }
    std::vector<fs::path> files;
    for (const auto & e : fs::directory_iterator(d)) {
      if (e.path().extension() == ".json") {
        files.push_back(e.path());
      }
    }
    // Numeric order so replay sees resources in creation order.
    std::sort(files.begin(), files.end(), [](const fs::path & a, const fs::path & b) {
      return id_number(a.stem().string()) < id_number(b.stem().string());
    });
    for (const auto & f : files) {
      const json j = read_json(f);
      const std::string id = j.at("id").get<std::string>();
      counters_[kind] = std::max(counters_[kind], id_number(id));
      fn(id, j);
    }
  };

  each(kTemplate, [&](const std::string & id, const json & j) {
    templates_.emplace(id, StoredTemplate{id, tmpl::template_from_json(j.at("template"))});
  });
  each(kSpec, [&](const std::string & id, const json & j) {
    specs_.emplace(
      id, StoredSpec{id, j.at("text").get<std::string>(), j.value("parent", ""), j.value("refinement", ""),
                     j.value("pair", "")});
  });
  each(kPair, [&](const std::string & id, const json & j) {
    auto e = std::make_shared<PairEntry>();
    auto & p = e->data;
    p.id = id;
    p.version = j.at("version").get<int>();
    p.template_id = j.at("templateId").get<std::string>();
    p.base_spec = j.at("baseSpec").get<std::string>();
    p.spec = j.at("spec").get<std::string>();
    p.param_map = j.at("paramMap").get<std::map<std::string, std::string>>();
    p.pair.tmpl = tmpl::template_from_json(j.at("template"));
    p.pair.spec = parse_stored(specs_.at(p.spec));
    p.pair.param_map = p.param_map;
    for (const auto & [k, v] : j.at("slots").items()) {
      p.pair.slots[k] = {v.at("temporal").get<bool>(), v.at("conditional").get<bool>()};
    }
    for (const auto & h : j.at("history")) {
      p.history.push_back(
        {h.at("text").get<std::string>(), h.at("parentSpec").get<std::string>(), h.at("spec").get<std::string>()});
    }
    pairs_.emplace(id, std::move(e));
  });
  each(kBundle, [&](const std::string & id, const json & j) {
    bundles_.emplace(id, StoredBundle{id, j.at("spec").get<std::string>()});
  });
  each(kInstance, [&](const std::string & id, const json & j) {
    auto e = std::make_shared<InstanceEntry>();
    e->data = {id, j.at("spec").get<std::string>(), j.at("params"), j.at("start").get<std::string>(), {}};
    for (const auto & op : j.at("ops")) {
      e->data.ops.push_back(op);
    }
    e->live = start_instance(e->data);
    for (const auto & op : e->data.ops) {
      runtime::apply_op(*e->live, op);
    }
    instances_.emplace(id, std::move(e));
  });
}

std::string Workspace::add_template(const tmpl::ContractTemplate & t)
{
  std::unique_lock lock{mu_};
  const std::string id = next_id(kTemplate);
  persist(kTemplate, id, {{"id", id}, {"template", tmpl::to_json(t)}});
  templates_.emplace(id, StoredTemplate{id, t});
  return id;
}

std::optional<StoredTemplate> Workspace::get_template(const std::string & id) const
{
  std::shared_lock lock{mu_};
  const auto it = templates_.find(id);
  if (it == templates_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::vector<StoredTemplate> Workspace::templates() const
{
  std::shared_lock lock{mu_};
  std::vector<StoredTemplate> out;
  for (const auto & [id, t] : templates_) {
    out.push_back(t);
  }
  std::sort(out.begin(), out.end(), [](const auto & a, const auto & b) {
    return id_number(a.id) < id_number(b.id);
  });
  return out;
}

std::string Workspace::add_spec(
  const std::string & text, const std::string & parent, const std::string & refinement, const std::string & pair)
{
  std::unique_lock lock{mu_};
  const std::string id = next_id(kSpec);
  StoredSpec s{id, text, parent, refinement, pair};
  persist(kSpec, id, spec_json(s));
  specs_.emplace(id, std::move(s));
  return id;
}

std::optional<StoredSpec> Workspace::get_spec(const std::string & id) const
{
  std::shared_lock lock{mu_};
  const auto it = specs_.find(id);
  if (it == specs_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::string Workspace::create_pair(
  const std::string & template_id, const std::string & spec_id, const std::map<std::string, std::string> & param_map)
{
  const auto t = get_template(template_id);
  if (!t) {
    not_found("template", template_id);
  }
  const auto s = get_spec(spec_id);
  if (!s) {
    not_found("spec", spec_id);
  }
  const auto map = param_map.empty() ? tmpl::identity_map(t->tmpl) : param_map;
  auto bound = tmpl::bind_pair(t->tmpl, parse_stored(*s), map);
  if (!bound.pair) {
    const auto & d = bound.diagnostics.front();
    throw Error(d.code, d.message);
  }

  auto e = std::make_shared<PairEntry>();
  e->data.template_id = template_id;
  e->data.base_spec = spec_id;
  e->data.spec = spec_id;
  e->data.param_map = map;
  e->data.pair = std::move(*bound.pair);

  std::unique_lock lock{mu_};
  e->data.id = next_id(kPair);
  persist(kPair, e->data.id, pair_json(e->data));
  pairs_.emplace(e->data.id, e);
  return e->data.id;
}

std::optional<StoredPair> Workspace::get_pair(const std::string & id) const
{
  std::shared_ptr<PairEntry> e;
  {
    std::shared_lock lock{mu_};
    const auto it = pairs_.find(id);
    if (it == pairs_.end()) {
      return std::nullopt;
    }
    e = it->second;
  }
  std::shared_lock lock{e->write};
  return e->data;
}

PairRefinement Workspace::refine(const std::string & pair_id, const std::string & line)
{
  std::shared_ptr<PairEntry> e;
  {
    std::shared_lock lock{mu_};
    const auto it = pairs_.find(pair_id);
    if (it == pairs_.end()) {
      not_found("pair", pair_id);
    }
    e = it->second;
  }

  std::unique_lock write{e->write};
  auto result = cnl::apply_script(e->data.pair, cnl::parse_script(line));
  const std::string parent = e->data.spec;
  const std::string spec_id = add_spec(print(result.pair.spec), parent, line, pair_id);

  StoredPair next = e->data;
  next.version += 1;
  next.spec = spec_id;
  next.pair = result.pair;
  next.history.push_back({line, parent, spec_id});
  persist(kPair, pair_id, pair_json(next));
  e->data = std::move(next);
  return {spec_id, std::move(result)};
}

std::vector<std::string> Workspace::replay_pair(const std::string & pair_id) const
{
  const auto p = get_pair(pair_id);
  if (!p) {
    not_found("pair", pair_id);
  }
  const auto t = get_template(p->template_id);
  const auto base = get_spec(p->base_spec);
  if (!t || !base) {
    throw Error(codes::kNotFound, "provenance of pair " + pair_id + " is incomplete");
  }
  auto bound = tmpl::bind_pair(t->tmpl, parse_stored(*base), p->param_map);
  if (!bound.pair) {
    throw Error(bound.diagnostics.front().code, bound.diagnostics.front().message);
  }
  std::vector<std::string> out;
  tmpl::TemplatePair head = std::move(*bound.pair);
  for (const auto & step : p->history) {
    head = cnl::apply_script(head, cnl::parse_script(step.text)).pair;
    out.push_back(print(head.spec));
  }
  return out;
}

std::string Workspace::add_bundle(const std::string & spec_id)
{
  if (!get_spec(spec_id)) {
    not_found("spec", spec_id);
  }
  std::unique_lock lock{mu_};
  const std::string id = next_id(kBundle);
  persist(kBundle, id, {{"id", id}, {"spec", spec_id}});
  bundles_.emplace(id, StoredBundle{id, spec_id});
  return id;
}

std::optional<StoredBundle> Workspace::get_bundle(const std::string & id) const
{
  std::shared_lock lock{mu_};
  const auto it = bundles_.find(id);
  if (it == bundles_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::unique_ptr<runtime::ContractInstance> Workspace::start_instance(const StoredInstance & s) const
{
  const auto it = specs_.find(s.spec);
  if (it == specs_.end()) {
    not_found("spec", s.spec);
  }
  const auto start = parse_timestamp(s.start);
  if (!start) {
    throw Error(codes::kBadRequest, "invalid start timestamp '" + s.start + "'");
  }
  auto compiled = std::make_shared<const runtime::CompiledContract>(
    runtime::compile(parse_stored(it->second), runtime::params_from_json(s.params)));
  return std::make_unique<runtime::ContractInstance>(std::move(compiled), *start);
}

std::pair<std::string, InstanceOp> Workspace::create_instance(
  const std::string & spec_id, const json & params, const std::string & start)
{
  auto e = std::make_shared<InstanceEntry>();
  e->data = {"", spec_id, params, start, {}};
  {
    std::shared_lock lock{mu_};
    e->live = start_instance(e->data);
  }
  InstanceOp out{e->live->initial_report(), e->live->status()};

  std::unique_lock lock{mu_};
  e->data.id = next_id(kInstance);
  persist(kInstance, e->data.id, instance_json(e->data));
  instances_.emplace(e->data.id, e);
  return {e->data.id, std::move(out)};
}

std::shared_ptr<Workspace::InstanceEntry> Workspace::instance_entry(const std::string & id) const
{
  std::shared_lock lock{mu_};
  const auto it = instances_.find(id);
  if (it == instances_.end()) {
    not_found("instance", id);
  }
  return it->second;
}

InstanceOp Workspace::instance_op(const std::string & id, const json & op)
{
  const auto e = instance_entry(id);
  const std::string kind = op.value("op", "");
  if (kind != "event" && kind != "tick" && kind != "exert") {
    throw Error(codes::kBadRequest, "unknown op '" + kind + "'");
  }
  std::unique_lock write{e->write};
  // Work on a copy so a failed persist leaves the live state untouched.
  auto next = std::make_unique<runtime::ContractInstance>(*e->live);
  auto report = runtime::apply_op(*next, op);
  StoredInstance data = e->data;
  data.ops.push_back(op);
  persist(kInstance, id, instance_json(data));
  e->data = std::move(data);
  e->live = std::move(next);
  return {std::move(report), e->live->status()};
}

runtime::Snapshot Workspace::instance_status(const std::string & id) const
{
  const auto e = instance_entry(id);
  std::shared_lock read{e->write};
  return e->live->status();
}

std::optional<StoredInstance> Workspace::get_instance(const std::string & id) const
{
  std::shared_ptr<InstanceEntry> e;
  {
    std::shared_lock lock{mu_};
    const auto it = instances_.find(id);
    if (it == instances_.end()) {
      return std::nullopt;
    }
    e = it->second;
  }
  std::shared_lock read{e->write};
  return e->data;
}

}  // namespace symboleo::service
