#pragma once

// Transport-independent request handling. The HTTP server and the CLI both
// go through the payload builders below, so equal inputs give equal JSON.

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "symboleo/cnl/refine.hpp"
#include "symboleo/codegen/generator.hpp"
#include "symboleo/common/diagnostic.hpp"
#include "symboleo/loc/report.hpp"
#include "symboleo/runtime/instance.hpp"
#include "symboleo/service/workspace.hpp"

namespace symboleo::service
{

inline constexpr std::string_view kApiPrefix = "/v1/";

namespace payload
{

nlohmann::json diagnostics(const std::vector<Diagnostic> & d);

// {"ok", "diagnostics", "canonical"?}
nlohmann::json parse(std::string_view text);
// {"valid", "diagnostics"}
nlohmann::json validate(std::string_view text);
// {"suggestions"}
nlohmann::json complete(std::string_view text, Position cursor);
// {"spec", "templateText", "linesAdded", "linesModified", "linesDeleted", "resolvedEvents"}
nlohmann::json refinement(const cnl::RefinementResult & r);
// {"contract", "fileCount", "totalLoc", "files": [{"path", "loc"}], "manifest"}
nlohmann::json bundle(const codegen::GeneratedBundle & b);
// to_json(report) plus {"csv"}
nlohmann::json report(const loc::LocReport & r);
// {"transitions", "status"}
nlohmann::json instance(const runtime::TransitionReport & t, const runtime::Snapshot & s);
// {"code", "message", "diagnostics"?}
nlohmann::json error(std::string_view code, std::string_view message, const std::vector<Diagnostic> & d = {});

}  // namespace payload

// 404 for E404, 409 for state conflicts (E802, E804), 400 otherwise.
int http_status(std::string_view code);

// Canonical spec text + generated bundle for each spec, labelled.
loc::ReportInput report_input(const std::string & label, const SymboleoSpec & spec);

// Diagnostics for the first line of a refinement script against `pair`,
// so callers can report spans before applying anything.
std::vector<Diagnostic> precheck_refinement(const tmpl::TemplatePair & pair, std::string_view script);

struct ApiRequest
{
  std::string method;
  std::string path;  // starts with /v1/
  std::string body;
};

struct ApiResponse
{
  int status = 200;
  std::string content_type = "application/json";
  std::string body;

  nlohmann::json json() const { return nlohmann::json::parse(body); }
};

class Api
{
public:
  explicit Api(Workspace & ws) : ws_(ws) {}

  // Never throws: failures become 4xx/5xx responses with an error payload.
  ApiResponse handle(const ApiRequest & req);

private:
  ApiResponse route(const std::string & method, const std::vector<std::string> & parts, const std::string & body);

  Workspace & ws_;
};

}  // namespace symboleo::service
