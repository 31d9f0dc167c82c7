#include "symboleo/service/api.hpp"

#include "symboleo/cnl/cnl.hpp"
#include "symboleo/common/error.hpp"
#include "symboleo/core/completion.hpp"
#include "symboleo/core/parser.hpp"
#include "symboleo/core/printer.hpp"
#include "symboleo/core/validator.hpp"
#include "symboleo/service/zip.hpp"

namespace symboleo::service
{

using nlohmann::json;

namespace payload
{

json diagnostics(const std::vector<Diagnostic> & d)
{
  json a = json::array();
  for (const auto & x : d) {
    a.push_back(x);
  }
  return a;
}

json parse(std::string_view text)
{
  const auto r = symboleo::parse(text);
  json j = {{"ok", r.spec.has_value()}, {"diagnostics", diagnostics(r.diagnostics)}};
  if (r.spec) {
    j["canonical"] = print(*r.spec);
  }
  return j;
}

json validate(std::string_view text)
{
  const auto r = symboleo::parse(text);
  auto d = r.spec ? symboleo::validate(*r.spec) : r.diagnostics;
  return {{"valid", !has_errors(d)}, {"diagnostics", diagnostics(d)}};
}

json complete(std::string_view text, Position cursor)
{
  return {{"suggestions", symboleo::complete(text, cursor)}};
}

json refinement(const cnl::RefinementResult & r)
{
  json events = json::array();
  for (const auto & e : r.resolved_events) {
    events.push_back(e);
  }
  return {
    {"spec", print(r.pair.spec)},
    {"templateText", r.template_text},
    {"linesAdded", r.spec_delta.added},
    {"linesModified", r.spec_delta.modified},
    {"linesDeleted", r.spec_delta.deleted},
    {"resolvedEvents", events}};
}

json bundle(const codegen::GeneratedBundle & b)
{
  const auto loc = codegen::count_loc(b);
  json files = json::array();
  for (const auto & [path, n] : loc.per_file) {
    files.push_back({{"path", path}, {"loc", n}});
  }
  return {
    {"contract", b.contract},
    {"fileCount", b.file_count()},
    {"totalLoc", loc.total},
    {"files", files},
    {"manifest", to_json(b.manifest)}};
}

json report(const loc::LocReport & r)
{
  json j = r;
  j["csv"] = to_csv(r);
  return j;
}

json instance(const runtime::TransitionReport & t, const runtime::Snapshot & s)
{
  return {{"transitions", runtime::to_json(t)}, {"status", runtime::to_json(s)}};
}

json error(std::string_view code, std::string_view message, const std::vector<Diagnostic> & d)
{
  json j = {{"code", code}, {"message", message}};
  if (!d.empty()) {
    j["diagnostics"] = diagnostics(d);
  }
  return j;
}

}  // namespace payload

int http_status(std::string_view code)
{
  if (code == codes::kNotFound) {
    return 404;
  }
  if (code == codes::kTimeRegression || code == codes::kPowerNotInEffect) {
    return 409;
  }
  return 400;
}

loc::ReportInput report_input(const std::string & label, const SymboleoSpec & spec)
{
  return {label, print(spec), codegen::generate(spec).files};
}

std::vector<Diagnostic> precheck_refinement(const tmpl::TemplatePair & pair, std::string_view script)
{
  const auto lines = cnl::parse_script(script);
  if (lines.empty()) {
    throw Error(codes::kNotInCnl, "empty refinement");
  }
  return cnl::parse_cnl(lines.front().text, pair, lines.front().slot).diagnostics;
}

namespace
{

std::vector<std::string> split_path(std::string_view path)
{
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    const auto j = path.find('/', i);
    const auto end = j == std::string_view::npos ? path.size() : j;
    if (end > i) {
      parts.emplace_back(path.substr(i, end - i));
    }
    i = end + 1;
  }
  return parts;
}

ApiResponse ok(json j)
{
  return {200, "application/json", j.dump()};
}

json body_json(const std::string & body)
{
  if (body.empty()) {
    return json::object();
  }
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    throw Error(codes::kBadRequest, "request body is not JSON");
  }
  return j;
}

std::string string_field(const json & j, const char * key)
{
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(codes::kBadRequest, std::string{"missing string field \""} + key + "\"");
  }
  return it->get<std::string>();
}

SymboleoSpec load_spec(const Workspace & ws, const std::string & id)
{
  const auto s = ws.get_spec(id);
  if (!s) {
    throw Error(codes::kNotFound, "unknown spec '" + id + "'");
  }
  auto r = parse(s->text);
  if (!r.spec) {
    throw Error(codes::kInvalidSpec, "spec " + id + " does not parse");
  }
  return std::move(*r.spec);
}

codegen::GeneratedBundle load_bundle(const Workspace & ws, const std::string & id)
{
  const auto b = ws.get_bundle(id);
  if (!b) {
    throw Error(codes::kNotFound, "unknown bundle '" + id + "'");
  }
  return codegen::generate(load_spec(ws, b->spec));
}

json pair_summary(const StoredPair & p)
{
  json slots = json::object();
  for (const auto & [k, v] : p.pair.slots) {
    slots[k] = {{"temporal", v.temporal}, {"conditional", v.conditional}};
  }
  json history = json::array();
  for (const auto & h : p.history) {
    history.push_back({{"text", h.text}, {"parentSpec", h.parent_spec}, {"spec", h.spec}});
  }
  json slot_list = json::array();
  for (const auto & s : p.pair.tmpl.slots) {
    slot_list.push_back({{"id", s.id}, {"clause", s.clause}, {"obligation", s.obligation}});
  }
  return {
    {"pairId", p.id},
    {"version", p.version},
    {"templateId", p.template_id},
    {"baseSpec", p.base_spec},
    {"spec", p.spec},
    {"templateText", tmpl::render_template(p.pair.tmpl)},
    {"slots", slot_list},
    {"refined", slots},
    {"history", history}};
}

}  // namespace

ApiResponse Api::handle(const ApiRequest & req)
{
  try {
    const std::string_view path = req.path;
    if (path.substr(0, kApiPrefix.size()) != kApiPrefix) {
      throw Error(codes::kNotFound, "no route " + req.path);
    }
    return route(req.method, split_path(path.substr(kApiPrefix.size())), req.body);
  } catch (const Error & e) {
    return {http_status(e.code()), "application/json", payload::error(e.code(), e.what()).dump()};
  } catch (const json::exception & e) {
    return {400, "application/json", payload::error(codes::kBadRequest, e.what()).dump()};
  } catch (const std::exception & e) {
    return {500, "application/json", payload::error("E500", e.what()).dump()};
  }
}

ApiResponse Api::route(const std::string & m, const std::vector<std::string> & p, const std::string & body)
{
  const bool get = m == "GET";
  const bool post = m == "POST";
  const std::size_t n = p.size();
  auto is = [&](std::initializer_list<const char *> want) {
    if (want.size() != n) {
      return false;
    }
    std::size_t i = 0;
    for (const char * w : want) {
      if (std::string_view{w} != "*" && p[i] != w) {
        return false;
      }
      ++i;
    }
    return true;
  };

  if (post && is({"parse"})) {
    const std::string text = string_field(body_json(body), "text");
    json j = payload::parse(text);
    if (j["ok"].get<bool>()) {
      j["specId"] = ws_.add_spec(j["canonical"].get<std::string>());
    }
    return ok(j);
  }
  if (post && is({"validate"})) {
    const json req = body_json(body);
    if (req.contains("specId")) {
      const auto s = ws_.get_spec(string_field(req, "specId"));
      if (!s) {
        throw Error(codes::kNotFound, "unknown spec '" + req["specId"].get<std::string>() + "'");
      }
      return ok(payload::validate(s->text));
    }
    return ok(payload::validate(string_field(req, "text")));
  }
  if (post && is({"complete"})) {
    const json req = body_json(body);
    const Position cursor{req.value("line", 1), req.value("col", 1)};
    return ok(payload::complete(string_field(req, "text"), cursor));
  }
  if (is({"templates"})) {
    if (get) {
      json list = json::array();
      for (const auto & t : ws_.templates()) {
        json slots = json::array();
        for (const auto & s : t.tmpl.slots) {
          slots.push_back(s.id);
        }
        list.push_back({{"id", t.id}, {"name", t.tmpl.name}, {"slots", slots}});
      }
      return ok({{"templates", list}});
    }
    if (post) {
      json req = body_json(body);
      const json & doc = req.contains("template") ? req["template"] : req;
      return ok({{"templateId", ws_.add_template(tmpl::template_from_json(doc))}});
    }
  }
  if (get && is({"templates", "*"})) {
    const auto t = ws_.get_template(p[1]);
    if (!t) {
      throw Error(codes::kNotFound, "unknown template '" + p[1] + "'");
    }
    return ok({{"id", t->id}, {"template", tmpl::to_json(t->tmpl)}, {"text", tmpl::render_template(t->tmpl)}});
  }
  if (get && is({"specs", "*"})) {
    const auto s = ws_.get_spec(p[1]);
    if (!s) {
      throw Error(codes::kNotFound, "unknown spec '" + p[1] + "'");
    }
    return ok({{"id", s->id}, {"text", s->text}, {"parent", s->parent}, {"refinement", s->refinement},
               {"pair", s->pair}});
  }
  if (post && is({"specs", "*", "generate"})) {
    auto bundle = codegen::generate(load_spec(ws_, p[1]));
    json j = payload::bundle(bundle);
    j["bundleId"] = ws_.add_bundle(p[1]);
    return ok(j);
  }
  if (get && is({"bundles", "*"})) {
    json j = payload::bundle(load_bundle(ws_, p[1]));
    j["bundleId"] = p[1];
    return ok(j);
  }
  if (get && is({"bundles", "*", "archive"})) {
    return {200, "application/zip", make_zip(bundle_tree(load_bundle(ws_, p[1])))};
  }
  if (get && n >= 4 && p[0] == "bundles" && p[2] == "files") {
    std::string path = p[3];
    for (std::size_t i = 4; i < n; ++i) {
      path += "/" + p[i];
    }
    const auto tree = bundle_tree(load_bundle(ws_, p[1]));
    const auto it = tree.find(path);
    if (it == tree.end()) {
      throw Error(codes::kNotFound, "no file '" + path + "' in bundle " + p[1]);
    }
    const bool is_json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
    return {200, is_json ? "application/json" : "text/javascript", it->second};
  }
  if (post && is({"pairs"})) {
    const json req = body_json(body);
    std::map<std::string, std::string> map;
    if (req.contains("paramMap")) {
      map = req["paramMap"].get<std::map<std::string, std::string>>();
    }
    const std::string id = ws_.create_pair(string_field(req, "templateId"), string_field(req, "specId"), map);
    return ok(pair_summary(*ws_.get_pair(id)));
  }
  if (get && is({"pairs", "*"})) {
    const auto pr = ws_.get_pair(p[1]);
    if (!pr) {
      throw Error(codes::kNotFound, "unknown pair '" + p[1] + "'");
    }
    return ok(pair_summary(*pr));
  }
  if (get && is({"pairs", "*", "slots", "*", "options"})) {
    const auto pr = ws_.get_pair(p[1]);
    if (!pr) {
      throw Error(codes::kNotFound, "unknown pair '" + p[1] + "'");
    }
    json j = cnl::available_options(pr->pair, p[3]);
    return ok(j);
  }
  if (post && is({"pairs", "*", "refinements"})) {
    // Raw `Pk: text`, a JSON string, or {"text": ...}.
    std::string line = body;
    const json parsed = json::parse(body, nullptr, false);
    if (!parsed.is_discarded()) {
      if (parsed.is_string()) {
        line = parsed.get<std::string>();
      } else if (parsed.is_object()) {
        line = string_field(parsed, "text");
      }
    }
    const auto pr = ws_.get_pair(p[1]);
    if (!pr) {
      throw Error(codes::kNotFound, "unknown pair '" + p[1] + "'");
    }
    const auto diags = precheck_refinement(pr->pair, line);
    if (has_errors(diags)) {
      const auto & first = diags.front();
      return {http_status(first.code), "application/json",
              payload::error(first.code, first.message, diags).dump()};
    }
    const auto r = ws_.refine(p[1], line);
    json j = payload::refinement(r.result);
    j["specId"] = r.spec_id;
    j["pairVersion"] = ws_.get_pair(p[1])->version;
    return ok(j);
  }
  if (post && is({"pairs", "*", "replay"})) {
    const auto texts = ws_.replay_pair(p[1]);
    const auto pr = ws_.get_pair(p[1]);
    bool identical = true;
    for (std::size_t i = 0; i < texts.size(); ++i) {
      identical = identical && ws_.get_spec(pr->history[i].spec)->text == texts[i];
    }
    return ok({{"specs", texts}, {"identical", identical}});
  }
  if (post && is({"instances"})) {
    const json req = body_json(body);
    const auto [id, r] = ws_.create_instance(
      string_field(req, "specId"), req.value("params", json::object()), string_field(req, "start"));
    json j = payload::instance(r.report, r.status);
    j["instanceId"] = id;
    return ok(j);
  }
  if (get && is({"instances", "*"})) {
    const auto inst = ws_.get_instance(p[1]);
    if (!inst) {
      throw Error(codes::kNotFound, "unknown instance '" + p[1] + "'");
    }
    return ok({{"instanceId", inst->id}, {"specId", inst->spec}, {"params", inst->params}, {"start", inst->start},
               {"ops", inst->ops}, {"status", runtime::to_json(ws_.instance_status(p[1]))}});
  }
  if (get && is({"instances", "*", "status"})) {
    return ok(runtime::to_json(ws_.instance_status(p[1])));
  }
  if (post && (is({"instances", "*", "events"}) || is({"instances", "*", "ticks"}) ||
               is({"instances", "*", "powers", "*", "exert"}))) {
    json op = body_json(body);
    if (p[2] == "events") {
      op["op"] = "event";
    } else if (p[2] == "ticks") {
      op["op"] = "tick";
    } else {
      op = {{"op", "exert"}, {"power", p[3]}};
    }
    const auto r = ws_.instance_op(p[1], op);
    return ok(payload::instance(r.report, r.status));
  }
  if (post && is({"report"})) {
    const json req = body_json(body);
    const std::string base = string_field(req, "base");
    const auto refined = req.value("refined", std::vector<std::string>{});
    const auto labels = req.value("labels", std::vector<std::string>{});
    std::vector<loc::ReportInput> inputs;
    for (std::size_t i = 0; i < refined.size(); ++i) {
      const std::string label = i < labels.size() ? labels[i] : refined[i];
      inputs.push_back(report_input(label, load_spec(ws_, refined[i])));
    }
    return ok(payload::report(loc::build_report(report_input("Init", load_spec(ws_, base)), inputs)));
  }
  throw Error(codes::kNotFound, "no route " + m + " /v1/" + [&] {
    std::string s;
    for (const auto & x : p) {
      s += (s.empty() ? "" : "/") + x;
    }
    return s;
  }());
}

}  // namespace symboleo::service
