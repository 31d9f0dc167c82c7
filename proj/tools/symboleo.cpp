// Command-line front end. Exit codes: 0 success, 1 validation or domain
// error, 2 usage error (bad flags, unreadable files).

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "symboleo/cnl/cnl.hpp"
#include "symboleo/cnl/refine.hpp"
#include "symboleo/codegen/generator.hpp"
#include "symboleo/common/error.hpp"
#include "symboleo/core/parser.hpp"
#include "symboleo/core/printer.hpp"
#include "symboleo/loc/report.hpp"
#include "symboleo/runtime/scenario.hpp"
#include "symboleo/service/api.hpp"
#include "symboleo/service/server.hpp"
#include "symboleo/service/zip.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace symboleo;

namespace
{

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string & path)
{
  std::ifstream in{path, std::ios::binary};
  if (!in) {
    throw UsageError("cannot read " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path & path, const std::string & text)
{
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out{path, std::ios::binary | std::ios::trunc};
  out << text;
  if (!out) {
    throw UsageError("cannot write " + path.string());
  }
}

std::string severity_word(Severity s) { return s == Severity::Error ? "error" : "warning"; }

void print_diagnostics(const std::string & file, const std::vector<Diagnostic> & diags)
{
  for (const auto & d : diags) {
    std::cerr << file << ':' << d.span.start.line << ':' << d.span.start.col << ": " << severity_word(d.severity)
              << ' ' << d.code << ": " << d.message << '\n';
  }
}

std::vector<Diagnostic> diagnostics_from(const json & j)
{
  std::vector<Diagnostic> out;
  for (const auto & d : j) {
    Diagnostic x;
    x.severity = d.at("severity") == "error" ? Severity::Error : Severity::Warning;
    x.code = d.at("code").get<std::string>();
    x.message = d.at("message").get<std::string>();
    x.span.start = {d.at("range").at("start").at("line").get<int>(), d.at("range").at("start").at("col").get<int>()};
    x.span.end = {d.at("range").at("end").at("line").get<int>(), d.at("range").at("end").at("col").get<int>()};
    out.push_back(std::move(x));
  }
  return out;
}

SymboleoSpec load_spec(const std::string & path)
{
  auto r = parse(read_file(path));
  if (!r.spec) {
    print_diagnostics(path, r.diagnostics);
    const auto & d = r.diagnostics.front();
    throw Error(d.code, path + ": " + d.message);
  }
  return std::move(*r.spec);
}

tmpl::TemplatePair load_pair(const std::string & template_path, const std::string & spec_path)
{
  const auto doc = json::parse(read_file(template_path), nullptr, false);
  if (doc.is_discarded()) {
    throw UsageError(template_path + " is not JSON");
  }
  const auto t = tmpl::template_from_json(doc);
  auto bound = tmpl::bind_pair(t, load_spec(spec_path), tmpl::identity_map(t));
  if (!bound.pair) {
    print_diagnostics(template_path, bound.diagnostics);
    throw Error(bound.diagnostics.front().code, bound.diagnostics.front().message);
  }
  return std::move(*bound.pair);
}

void emit(const json & j) { std::cout << j.dump(2) << '\n'; }

struct Options
{
  bool json = false;
  std::string file;
  int line = 1;
  int col = 1;
  std::string template_path;
  std::string spec_path;
  std::vector<std::string> scripts;
  std::string out_dir;
  std::string zip_path;
  std::string params_path;
  std::string values_path;
  std::string scenario_path;
  std::string start;
  std::string slot;
  std::string base;
  std::vector<std::string> refined;
  std::vector<std::string> labels;
  std::string format = "csv";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir;
  std::string ui_dir;
};

int cmd_parse(const Options & o)
{
  const json j = service::payload::parse(read_file(o.file));
  if (o.json) {
    emit(j);
  } else if (j["ok"].get<bool>()) {
    std::cout << j["canonical"].get<std::string>();
  }
  if (!o.json) {
    print_diagnostics(o.file, diagnostics_from(j["diagnostics"]));
  }
  return j["ok"].get<bool>() ? kOk : kInvalid;
}

int cmd_validate(const Options & o)
{
  const json j = service::payload::validate(read_file(o.file));
  if (o.json) {
    emit(j);
  } else {
    print_diagnostics(o.file, diagnostics_from(j["diagnostics"]));
    std::cout << (j["valid"].get<bool>() ? "valid\n" : "invalid\n");
  }
  return j["valid"].get<bool>() ? kOk : kInvalid;
}

int cmd_complete(const Options & o)
{
  const json j = service::payload::complete(read_file(o.file), {o.line, o.col});
  if (o.json) {
    emit(j);
  } else {
    for (const auto & s : j["suggestions"]) {
      std::cout << s.get<std::string>() << '\n';
    }
  }
  return kOk;
}

int cmd_options(const Options & o)
{
  const auto pair = load_pair(o.template_path, o.spec_path);
  json j = cnl::available_options(pair, o.slot);
  if (o.json) {
    emit(j);
  } else {
    for (const auto & opt : j["options"]) {
      std::cout << opt["pattern"].get<std::string>() << '\n';
    }
  }
  return kOk;
}

int cmd_instantiate(const Options & o)
{
  const auto doc = json::parse(read_file(o.template_path), nullptr, false);
  const auto values = json::parse(read_file(o.values_path), nullptr, false);
  if (doc.is_discarded() || values.is_discarded()) {
    throw UsageError("template and values must be JSON");
  }
  const auto text = tmpl::instantiate(tmpl::template_from_json(doc), runtime::params_from_json(values));
  if (o.json) {
    emit({{"text", text}});
  } else {
    std::cout << text << '\n';
  }
  return kOk;
}

int cmd_refine(const Options & o)
{
  const auto pair = load_pair(o.template_path, o.spec_path);
  json results = json::array();
  for (const auto & script_path : o.scripts) {
    const std::string script = read_file(script_path);
    const auto diags = service::precheck_refinement(pair, script);
    if (has_errors(diags)) {
      print_diagnostics(script_path, diags);
      throw Error(diags.front().code, script_path + ": " + diags.front().message);
    }
    const auto r = cnl::apply_script(pair, cnl::parse_script(script));
    const std::string stem = fs::path{script_path}.stem().string();
    if (!o.out_dir.empty()) {
      write_file(fs::path{o.out_dir} / (stem + ".symboleo"), print(r.pair.spec));
      write_file(fs::path{o.out_dir} / (stem + ".txt"), r.template_text);
    }
    json j = service::payload::refinement(r);
    if (o.scripts.size() > 1) {
      j["script"] = stem;
    }
    results.push_back(std::move(j));
  }
  if (o.json) {
    emit(results.size() == 1 ? results[0] : json{{"results", results}});
  } else if (o.out_dir.empty()) {
    for (const auto & r : results) {
      std::cout << r["spec"].get<std::string>();
    }
  } else {
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto & r = results[i];
      std::cout << fs::path{o.scripts[i]}.stem().string() << ": +" << r["linesAdded"] << " ~"
                << r["linesModified"] << " -" << r["linesDeleted"] << '\n';
    }
  }
  return kOk;
}

int cmd_generate(const Options & o)
{
  const auto bundle = codegen::generate(load_spec(o.file));
  const auto tree = service::bundle_tree(bundle);
  if (!o.out_dir.empty()) {
    service::write_tree(o.out_dir, tree);
  }
  if (!o.zip_path.empty()) {
    write_file(o.zip_path, service::make_zip(tree));
  }
  const json j = service::payload::bundle(bundle);
  if (o.json) {
    emit(j);
  } else {
    for (const auto & f : j["files"]) {
      std::cout << f["path"].get<std::string>() << ' ' << f["loc"] << '\n';
    }
    std::cout << "total " << j["totalLoc"] << " LOC in " << j["fileCount"] << " files\n";
  }
  return kOk;
}

int cmd_simulate(const Options & o)
{
  const auto params = json::parse(read_file(o.params_path), nullptr, false);
  if (params.is_discarded()) {
    throw UsageError(o.params_path + " is not JSON");
  }
  const auto start = parse_timestamp(o.start);
  if (!start) {
    throw UsageError("invalid --start '" + o.start + "'");
  }
  auto compiled = std::make_shared<const runtime::CompiledContract>(
    runtime::compile(load_spec(o.file), runtime::params_from_json(params)));
  runtime::ContractInstance inst{compiled, *start};
  const auto ops = runtime::parse_scenario(read_file(o.scenario_path));
  const auto result = runtime::run_scenario(inst, ops);
  if (o.json) {
    emit(runtime::to_json(result));
  } else {
    for (const auto & t : inst.initial_report()) {
      std::cout << format_timestamp(t.at) << "  " << t.id << ": " << t.from << " -> " << t.to << " (" << t.reason
                << ")\n";
    }
    for (const auto & s : result.steps) {
      for (const auto & t : s.report) {
        std::cout << format_timestamp(t.at) << "  " << t.id << ": " << t.from << " -> " << t.to << " ("
                  << t.reason << ")\n";
      }
      if (!s.ok) {
        std::cerr << o.scenario_path << ':' << s.line << ": " << s.error << '\n';
      }
    }
    std::cout << runtime::to_json(result.final).dump(2) << '\n';
  }
  return result.ok ? kOk : kInvalid;
}

int cmd_report(const Options & o)
{
  std::vector<loc::ReportInput> refined;
  for (std::size_t i = 0; i < o.refined.size(); ++i) {
    const std::string label = i < o.labels.size() ? o.labels[i] : fs::path{o.refined[i]}.stem().string();
    refined.push_back(service::report_input(label, load_spec(o.refined[i])));
  }
  const auto report = loc::build_report(service::report_input("Init", load_spec(o.base)), refined);
  if (o.json || o.format == "json") {
    emit(service::payload::report(report));
  } else if (o.format == "text") {
    std::cout << loc::to_text(report);
  } else {
    std::cout << loc::to_csv(report);
  }
  return kOk;
}

service::Server * g_server = nullptr;

extern "C" void on_signal(int)
{
  if (g_server != nullptr) {
    g_server->stop();
  }
}

int cmd_serve(const Options & o)
{
  service::Workspace ws{o.data_dir};
  service::Server server{ws, {o.host, o.port, o.ui_dir}};
  const int port = server.bind();
  if (port < 0) {
    throw UsageError("cannot bind " + o.host + ":" + std::to_string(o.port));
  }
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "listening on http://" << o.host << ':' << port << "/v1/" << std::endl;
  server.listen();
  g_server = nullptr;
  return kOk;
}

std::string env_or(const char * name, std::string fallback)
{
  const char * v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string{v} : fallback;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Symboleo contract toolchain"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json, "machine-readable output; errors as JSON on stderr");

  auto * parse_cmd = app.add_subcommand("parse", "parse and print a spec canonically");
  parse_cmd->add_option("file", o.file, "spec file")->required();

  auto * validate_cmd = app.add_subcommand("validate", "report semantic diagnostics");
  validate_cmd->add_option("file", o.file, "spec file")->required();

  auto * complete_cmd = app.add_subcommand("complete", "completion candidates at a cursor");
  complete_cmd->add_option("file", o.file, "spec file")->required();
  complete_cmd->add_option("--line", o.line, "1-based line")->required();
  complete_cmd->add_option("--col", o.col, "1-based column")->required();

  auto * options_cmd = app.add_subcommand("options", "controlled-language choices for a slot");
  options_cmd->add_option("--template", o.template_path, "template JSON")->required();
  options_cmd->add_option("--spec", o.spec_path, "paired spec")->required();
  options_cmd->add_option("--slot", o.slot, "slot id, e.g. P1")->required();

  auto * inst_cmd = app.add_subcommand("instantiate", "fill template placeholders with literals");
  inst_cmd->add_option("--template", o.template_path, "template JSON")->required();
  inst_cmd->add_option("--values", o.values_path, "JSON object of parameter values")->required();

  auto * refine_cmd = app.add_subcommand("refine", "apply refinement scripts to a template/spec pair");
  refine_cmd->add_option("--template", o.template_path, "template JSON")->required();
  refine_cmd->add_option("--spec", o.spec_path, "paired spec")->required();
  refine_cmd->add_option("--script", o.scripts, "script file(s); each applies to the base pair")->required();
  refine_cmd->add_option("--out", o.out_dir, "write <script>.symboleo and <script>.txt here");

  auto * gen_cmd = app.add_subcommand("generate", "generate smart-contract code");
  gen_cmd->add_option("file", o.file, "spec file")->required();
  gen_cmd->add_option("--out", o.out_dir, "bundle directory");
  gen_cmd->add_option("--zip", o.zip_path, "also write the bundle as a zip archive");

  auto * sim_cmd = app.add_subcommand("simulate", "replay a JSONL scenario");
  sim_cmd->add_option("file", o.file, "spec file")->required();
  sim_cmd->add_option("--params", o.params_path, "JSON parameter values")->required();
  sim_cmd->add_option("--scenario", o.scenario_path, "JSONL scenario")->required();
  sim_cmd->add_option("--start", o.start, "start timestamp, YYYY-MM-DD[THH:MM]")->required();

  auto * report_cmd = app.add_subcommand("report", "LOC change report across refinements");
  report_cmd->add_option("--base", o.base, "base spec")->required();
  report_cmd->add_option("--refined", o.refined, "refined specs")->required();
  report_cmd->add_option("--labels", o.labels, "column labels (default: file stems)");
  report_cmd->add_option("--format", o.format, "csv, text or json")
    ->check(CLI::IsMember({"csv", "text", "json"}));

  auto * serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  o.port = std::stoi(env_or("PORT", "8080"));
  o.data_dir = env_or("DATA_DIR", "");
  o.ui_dir = env_or("UI_DIR", "");
  serve_cmd->add_option("--port", o.port, "port (env PORT)");
  serve_cmd->add_option("--host", o.host, "bind address");
  serve_cmd->add_option("--data-dir", o.data_dir, "workspace directory (env DATA_DIR)");
  serve_cmd->add_option("--ui-dir", o.ui_dir, "static UI assets for /ui/ (env UI_DIR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  auto fail = [&](std::string_view code, const std::string & msg, int rc) {
    if (o.json) {
      std::cerr << service::payload::error(code, msg).dump() << '\n';
    } else {
      std::cerr << "error " << code << ": " << msg << '\n';
    }
    return rc;
  };

  try {
    if (*parse_cmd) {
      return cmd_parse(o);
    }
    if (*validate_cmd) {
      return cmd_validate(o);
    }
    if (*complete_cmd) {
      return cmd_complete(o);
    }
    if (*options_cmd) {
      return cmd_options(o);
    }
    if (*inst_cmd) {
      return cmd_instantiate(o);
    }
    if (*refine_cmd) {
      return cmd_refine(o);
    }
    if (*gen_cmd) {
      return cmd_generate(o);
    }
    if (*sim_cmd) {
      return cmd_simulate(o);
    }
    if (*report_cmd) {
      return cmd_report(o);
    }
    if (*serve_cmd) {
      return cmd_serve(o);
    }
  } catch (const UsageError & e) {
    return fail(codes::kBadRequest, e.what(), kUsage);
  } catch (const Error & e) {
    return fail(e.code(), e.what(), kInvalid);
  } catch (const std::exception & e) {
    return fail("E500", e.what(), kInvalid);
  }
  return kUsage;
}
