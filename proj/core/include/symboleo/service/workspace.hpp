#pragma once

// File-backed store of templates, specs, pairs, bundles and instances.
//
// Layout under the data directory (all JSON, one file per resource):
//   templates/tpl-N.json  specs/spec-N.json  pairs/pair-N.json
//   bundles/bundle-N.json instances/inst-N.json
// An empty directory path keeps everything in memory.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "symboleo/cnl/refine.hpp"
#include "symboleo/runtime/instance.hpp"
#include "symboleo/tmpl/template.hpp"

namespace symboleo::service
{

struct StoredSpec
{
  std::string id;
  std::string text;  // canonical when it parsed
  std::string parent;      // spec this one was refined from
  std::string refinement;  // the `Pk: ...` line that produced it
  std::string pair;
};

struct StoredTemplate
{
  std::string id;
  tmpl::ContractTemplate tmpl;
};

struct RefinementStep
{
  std::string text;
  std::string parent_spec;
  std::string spec;
};

struct StoredPair
{
  std::string id;
  int version = 1;  // bumps on every refinement
  std::string template_id;
  std::string base_spec;
  std::string spec;  // current head
  std::map<std::string, std::string> param_map;
  tmpl::TemplatePair pair;
  std::vector<RefinementStep> history;
};

struct StoredBundle
{
  std::string id;
  std::string spec;
};

struct StoredInstance
{
  std::string id;
  std::string spec;
  nlohmann::json params;
  std::string start;
  std::vector<nlohmann::json> ops;  // successful operations, in order
};

struct PairRefinement
{
  std::string spec_id;
  cnl::RefinementResult result;
};

struct InstanceOp
{
  runtime::TransitionReport report;
  runtime::Snapshot status;
};

class Workspace
{
public:
  explicit Workspace(std::filesystem::path dir = {});
  Workspace(const Workspace &) = delete;
  Workspace & operator=(const Workspace &) = delete;

  const std::filesystem::path & dir() const { return dir_; }

  std::string add_template(const tmpl::ContractTemplate & t);
  std::optional<StoredTemplate> get_template(const std::string & id) const;
  std::vector<StoredTemplate> templates() const;

  std::string add_spec(const std::string & text, const std::string & parent = {},
                       const std::string & refinement = {}, const std::string & pair = {});
  std::optional<StoredSpec> get_spec(const std::string & id) const;

  // Throws Error(E404) for unknown ids; bind diagnostics come back via
  // Error(E5xx) with the first error.
  std::string create_pair(const std::string & template_id, const std::string & spec_id,
                          const std::map<std::string, std::string> & param_map);
  std::optional<StoredPair> get_pair(const std::string & id) const;

  // Applies one `Pk: text` line to the pair's head and stores the result as
  // a new spec. Atomic per pair.
  PairRefinement refine(const std::string & pair_id, const std::string & line);

  // Re-applies the pair's refinement history from its base spec; returns
  // the canonical text of each derived spec.
  std::vector<std::string> replay_pair(const std::string & pair_id) const;

  std::string add_bundle(const std::string & spec_id);
  std::optional<StoredBundle> get_bundle(const std::string & id) const;

  // E404, E701, E801.
  std::pair<std::string, InstanceOp> create_instance(
    const std::string & spec_id, const nlohmann::json & params, const std::string & start);
  // Runs a scenario-style op (`event`, `tick`, `exert`) and appends it to
  // the instance's log when it succeeds.
  InstanceOp instance_op(const std::string & id, const nlohmann::json & op);
  runtime::Snapshot instance_status(const std::string & id) const;
  std::optional<StoredInstance> get_instance(const std::string & id) const;

private:
  struct PairEntry
  {
    StoredPair data;
    mutable std::shared_mutex write;
  };
  struct InstanceEntry
  {
    StoredInstance data;
    std::unique_ptr<runtime::ContractInstance> live;
    mutable std::shared_mutex write;
  };

  std::string next_id(const std::string & kind);
  void persist(const std::string & kind, const std::string & id, const nlohmann::json & j) const;
  void load();
  std::shared_ptr<InstanceEntry> instance_entry(const std::string & id) const;
  std::unique_ptr<runtime::ContractInstance> start_instance(const StoredInstance & s) const;

  std::filesystem::path dir_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::size_t> counters_;
  std::map<std::string, StoredTemplate> templates_;
  std::map<std::string, StoredSpec> specs_;
  std::map<std::string, std::shared_ptr<PairEntry>> pairs_;
  std::map<std::string, StoredBundle> bundles_;
  std::map<std::string, std::shared_ptr<InstanceEntry>> instances_;
};

}  // namespace symboleo::service
