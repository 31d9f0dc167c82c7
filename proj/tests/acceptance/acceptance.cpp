// Acceptance criteria P1..P9 for the transactive-energy case study. Prints
// one PASS/FAIL line per criterion and exits non-zero if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string_view>

#include "fixtures.hpp"
#include "symboleo/codegen/generator.hpp"
#include "symboleo/core/validator.hpp"
#include "symboleo/loc/report.hpp"
#include "symboleo/runtime/scenario.hpp"
#include "symboleo/service/api.hpp"

namespace fs = std::filesystem;
namespace t = symboleo::testing;
using namespace symboleo;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome
{
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string & what)
  {
    if (!cond) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Run
{
  int status = 0;
  std::string out;
};

Run shell(const std::string & cmd)
{
  Run r;
  FILE * p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) {
    return {127, {}};
  }
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) {
    r.out.append(buf.data(), n);
  }
  r.status = WEXITSTATUS(pclose(p));
  return r;
}

std::string cli() { return SYMBOLEO_CLI; }

// Every file under `dir`, keyed by relative path.
loc::FileMap read_tree(const fs::path & dir)
{
  loc::FileMap files;
  if (!fs::exists(dir)) {
    return files;
  }
  for (const auto & e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), dir).generic_string()] = t::slurp(e.path().string());
    }
  }
  return files;
}

std::size_t error_count(const std::vector<Diagnostic> & d)
{
  return static_cast<std::size_t>(
    std::count_if(d.begin(), d.end(), [](const Diagnostic & x) { return x.severity == Severity::Error; }));
}

std::string refine_command(const fs::path & out)
{
  std::string cmd = cli() + " refine --template " + t::te_dir() + "/transactive_energy.cttpl.json --spec " +
                    t::te_dir() + "/transactive_energy.symboleo --script";
  for (const auto & l : t::refinement_labels()) {
    cmd += " " + t::te_dir() + "/refinements/" + l + ".cnl";
  }
  return cmd + " --out " + out.string();
}

struct Workdir
{
  Workdir()
  {
    std::random_device rd;
    path = fs::temp_directory_path() / ("symboleo-acceptance-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~Workdir() { fs::remove_all(path); }
  fs::path path;
};

std::vector<std::pair<std::string, SymboleoSpec>> all_specs()
{
  std::vector<std::pair<std::string, SymboleoSpec>> specs{{"Init", t::te_spec()}};
  for (const auto & l : t::refinement_labels()) {
    specs.emplace_back(l, t::te_refined(l).pair.spec);
  }
  return specs;
}

void p1(Outcome & o, const fs::path & work)
{
  const auto parsed = parse(t::te_source());
  o.require(parsed.spec.has_value() && error_count(parsed.diagnostics) == 0, "base spec parses");
  if (parsed.spec) {
    o.require(error_count(validate(*parsed.spec)) == 0, "base spec validates");
  }
  const auto tpl = t::te_template();
  o.require(error_count(tmpl::check_template(tpl)) == 0, "template checks");
  const auto bound = tmpl::bind_pair(tpl, t::te_spec(), tmpl::identity_map(tpl));
  o.require(bound.pair.has_value() && error_count(bound.diagnostics) == 0, "template binds");

  const auto out = work / "p1";
  const auto t0 = Clock::now();
  const auto r = shell(refine_command(out));
  const double secs = seconds_since(t0);
  o.require(r.status == 0, "CLI batch refine exits 0");
  o.require(secs < 5.0, "batch under 5 s");
  std::size_t ok = 0;
  for (const auto & l : t::refinement_labels()) {
    const auto file = out / (l + ".symboleo");
    if (!fs::exists(file)) {
      o.require(false, l + ".symboleo written");
      continue;
    }
    const auto text = t::slurp(file.string());
    const auto p = parse(text);
    if (p.spec && error_count(validate(*p.spec)) == 0 && text == print(t::te_refined(l).pair.spec)) {
      ++ok;
    }
  }
  o.require(ok == t::refinement_labels().size(), "every refined spec is valid and matches the library");
  o.detail << " 9 refinements in " << secs << " s, " << ok << "/9 valid";
}

void p2_p3(Outcome & p2, Outcome & p3)
{
  for (const auto & l : t::refinement_labels()) {
    const auto d = t::te_refined(l).spec_delta;
    p2.require(d.deleted == 0, l + " deletes nothing");
    p2.detail << " " << l << "=" << d.added << "/" << d.modified << "/" << d.deleted;
    if (l == "R2" || l == "R4") {
      p3.require(d.added == 0, l + " adds no line");
      p3.detail << " " << l << "+" << d.added;
    } else if (l == "R3" || l == "R5") {
      p3.require(d.added >= 1, l + " adds a line");
      p3.detail << " " << l << "+" << d.added;
    }
  }
}

void p4(Outcome & o)
{
  const auto t0 = Clock::now();
  const auto specs = all_specs();
  std::vector<loc::ReportInput> refined;
  for (std::size_t i = 1; i < specs.size(); ++i) {
    refined.push_back(service::report_input(specs[i].first, specs[i].second));
  }
  const auto report = loc::build_report(service::report_input("Init", specs[0].second), refined);
  const double secs = seconds_since(t0);

  double lo = 1e9;
  double hi = 0.0;
  const auto base_sc = report.columns.front().sc_loc;
  for (const auto & c : report.columns) {
    o.require(c.ratio >= 8.0 && c.ratio <= 25.0, c.label + " ratio in [8, 25]");
    o.require(c.sc_loc >= base_sc, c.label + " SC LOC >= Init");
    lo = std::min(lo, c.ratio);
    hi = std::max(hi, c.ratio);
    o.detail << " " << c.label << ":" << c.ratio;
  }
  o.require(report.columns.size() == 10, "10 bundles");
  o.require(hi / lo <= 1.2, "max/min ratio <= 1.2");
  o.require(secs < 10.0, "under 10 s");
  o.detail << " max/min=" << hi / lo << " in " << secs << " s";
}

void p5(Outcome & o)
{
  struct Column
  {
    const char * label;
    std::size_t added, modified, deleted, loc;
    double printed;
  };
  // Raw generated-code counts as published for each refinement.
  static const Column table[] = {
    {"R1", 2, 11, 0, 608, 2.1},  {"R2", 3, 12, 2, 607, 2.5},   {"R3", 32, 5, 8, 630, 7.1},
    {"R4", 3, 11, 2, 607, 2.6},  {"R5", 41, 4, 0, 647, 7.0},   {"R1R2", 9, 6, 6, 609, 3.4},
    {"R1R3", 34, 9, 8, 632, 8.1}, {"R4R2", 8, 6, 6, 608, 3.3}, {"R4R3", 33, 9, 8, 631, 7.9},
  };
  int matches = 0;
  for (const auto & c : table) {
    const double pct = loc::pct_changed({c.added, c.modified, c.deleted}, c.loc);
    // 2.8 vs 2.5 lands exactly on the tolerance edge; allow for binary rounding.
    if (std::abs(pct - c.printed) <= 0.3 + 1e-9) {
      ++matches;
    }
    if (std::abs(pct - c.printed) > 0.05) {
      o.detail << " " << c.label << " computes " << pct << " vs printed " << c.printed << " (discrepant)";
    }
  }
  o.require(matches >= 8, "at least 8 of 9 columns reproduce");
  o.detail << "; " << matches << "/9 within 0.3";
}

void p6(Outcome & o)
{
  const auto params = t::te_params();
  std::size_t same = 0;
  for (const auto & [label, spec] : all_specs()) {
    const auto bundle = codegen::generate(spec);
    const auto embedded = codegen::manifest_from_json(nlohmann::json::parse(bundle.files.at("manifest.json")));
    const auto compiled = runtime::describe(runtime::compile(spec, params));
    if (embedded == compiled) {
      ++same;
    } else {
      o.require(false, label + " manifest matches compiled state machine");
    }
  }
  o.require(same == 10, "10 fixtures");
  o.detail << " " << same << "/10 identical";
}

struct Sim
{
  explicit Sim(const std::string & label)
  : inst{
      std::make_shared<const runtime::CompiledContract>(runtime::compile(t::te_refined(label).pair.spec, t::te_params())),
      *parse_timestamp("2024-01-01")}
  {
  }

  void op(const std::string & jsonl) { runtime::apply_op(inst, nlohmann::json::parse(jsonl)); }

  std::string state(const std::string & id) const
  {
    const auto s = inst.status();
    if (id == s.contract) {
      return std::string{to_string(s.state)};
    }
    for (const auto & [k, v] : s.obligations) {
      if (k == id) {
        return std::string{to_string(v)};
      }
    }
    for (const auto & [k, v] : s.powers) {
      if (k == id) {
        return std::string{to_string(v)};
      }
    }
    return "absent";
  }

  runtime::ContractInstance inst;
};

bool scenario_ok(const std::string & name, const std::string & label, const std::string & expected_final)
{
  Sim sim{label};
  const auto r = runtime::run_scenario(
    sim.inst, runtime::parse_scenario(t::slurp(t::te_dir() + "/scenarios/" + label + "_" + name + ".jsonl")));
  return r.ok && to_string(r.final.state) == expected_final;
}

void p7(Outcome & o)
{
  auto timed = [&](const std::string & tag, const std::function<bool()> & fn) {
    const auto t0 = Clock::now();
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception & e) {
      o.detail << " " << tag << " threw " << e.what();
    }
    const double secs = seconds_since(t0);
    o.require(ok, tag);
    o.require(secs < 1.0, tag + " under 1 s");
    o.detail << " " << tag << (ok ? " ok" : " bad") << " (" << secs * 1000.0 << " ms)";
  };

  timed("(a)", [] {
    Sim s{"R1R2"};
    s.op(R"({"op":"event","event":"evt_dispatch_energy","at":"2024-02-01T09:00","attributes":{"voltage":230}})");
    s.op(R"({"op":"event","event":"evt_pay","at":"2024-03-15T10:00"})");
    return s.state("TransactiveEnergy") == "Fulfilled" && scenario_ok("fulfilled", "R1R2", "Fulfilled");
  });
  timed("(b)", [] {
    Sim s{"R2"};
    s.op(R"({"op":"tick","at":"2024-04-01"})");
    const bool violated = s.state("O_pay") == "Violated" && s.state("P_suspend") == "InEffect";
    s.op(R"({"op":"exert","power":"P_suspend"})");
    return violated && s.state("O_deliver") == "Suspended" && scenario_ok("late_payment", "R2", "InEffect");
  });
  timed("(c)", [] {
    bool ok = true;
    for (const int volts : {260, 200}) {
      Sim s{"R1R2"};
      s.op(
        R"({"op":"event","event":"evt_dispatch_energy","at":"2024-02-01T09:00","attributes":{"voltage":)" +
        std::to_string(volts) + "}}");
      ok = ok && s.state("P_terminate") == "InEffect";
      s.op(R"({"op":"exert","power":"P_terminate"})");
      ok = ok && s.state("TransactiveEnergy") == "Terminated";
    }
    return ok && scenario_ok("over_voltage", "R1R2", "Terminated");
  });
  timed("(d)", [] {
    Sim s{"R4R3"};
    s.op(R"({"op":"tick","at":"2024-03-31"})");
    bool ok = s.state("O_deliver") == "Violated";
    s.op(R"({"op":"tick","at":"2025-01-01"})");
    const auto snap = s.inst.status();
    const bool no_pay_deadline = std::none_of(
      snap.deadlines.begin(), snap.deadlines.end(), [](const runtime::Deadline & d) { return d.obligation == "O_pay"; });
    ok = ok && s.state("O_pay") == "InEffect" && no_pay_deadline;
    return ok && scenario_ok("missed_delivery", "R4R3", "InEffect");
  });
}

void p8(Outcome & o)
{
  struct Suite
  {
    const char * name;
    std::string command;
  };
  const Suite suites[] = {
    {"round-trip", std::string{SYMBOLEO_ROUNDTRIP_TESTS}},
    {"cnl", std::string{SYMBOLEO_CNL_TESTS} + " --gtest_filter=cnl_property.*"},
    {"diff", std::string{SYMBOLEO_LOC_TESTS} + " --gtest_filter=diff_property.*"},
    {"runtime-oracle", std::string{SYMBOLEO_RUNTIME_TESTS} + " --gtest_filter=runtime_oracle.*"},
  };
  double total = 0.0;
  for (const auto & s : suites) {
    const auto t0 = Clock::now();
    const auto r = shell(s.command);
    const double secs = seconds_since(t0);
    total += secs;
    o.require(r.status == 0 && r.out.find("[  PASSED  ]") != std::string::npos, std::string{s.name} + " green");
    o.detail << " " << s.name << " " << secs << " s";
  }
  o.require(total < 60.0, "all suites under 60 s");
  o.detail << ", total " << total << " s";
}

// FNV-1a 64: stable across platforms, unlike std::hash.
std::string fnv1a(const std::string & bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h = (h ^ c) * 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string digest_listing(const loc::FileMap & tree)
{
  std::string out;
  for (const auto & [path, bytes] : tree) {
    out += path + " " + fnv1a(bytes) + " " + std::to_string(bytes.size()) + "\n";
  }
  return out;
}

const std::string & golden_path()
{
  static const std::string p = t::te_dir() + "/golden/digests.txt";
  return p;
}

bool g_update_golden = false;

void p9(Outcome & o, const fs::path & work)
{
  std::array<loc::FileMap, 2> trees;
  for (int run = 0; run < 2; ++run) {
    const auto dir = work / ("p9-" + std::to_string(run));
    const auto r = shell(refine_command(dir / "refined"));
    o.require(r.status == 0, "refine run " + std::to_string(run));
    for (const auto & l : t::refinement_labels()) {
      const auto g = shell(
        cli() + " generate " + (dir / "refined" / (l + ".symboleo")).string() + " --out " + (dir / "gen" / l).string());
      o.require(g.status == 0, "generate " + l);
    }
    const auto g = shell(
      cli() + " generate " + t::te_dir() + "/transactive_energy.symboleo --out " + (dir / "gen" / "Init").string());
    o.require(g.status == 0, "generate Init");
    trees[run] = read_tree(dir);
  }
  o.require(!trees[0].empty() && trees[0] == trees[1], "two runs byte-identical");
  const auto listing = digest_listing(trees[0]);
  if (g_update_golden) {
    std::ofstream{golden_path(), std::ios::binary} << listing;
  }
  // Committed digests carry the comparison to other platforms.
  o.require(fs::exists(golden_path()) && t::slurp(golden_path()) == listing, "outputs match golden digests");
  o.detail << " " << trees[0].size() << " files identical across runs and against golden digests";
}

}  // namespace

int main(int argc, char ** argv)
{
  g_update_golden = argc > 1 && std::string_view{argv[1]} == "--update-golden";
  Workdir work;
  std::vector<std::pair<std::string, Outcome>> results;
  auto run = [&](const std::string & id, const std::function<void(Outcome &)> & fn) {
    auto & [name, o] = results.emplace_back(id, Outcome{});
    try {
      fn(o);
    } catch (const std::exception & e) {
      o.require(false, std::string{"exception: "} + e.what());
    }
  };

  run("P1", [&](Outcome & o) { p1(o, work.path); });
  Outcome p2o;
  Outcome p3o;
  try {
    p2_p3(p2o, p3o);
  } catch (const std::exception & e) {
    p2o.require(false, e.what());
    p3o.require(false, e.what());
  }
  results.emplace_back("P2", std::move(p2o));
  results.emplace_back("P3", std::move(p3o));
  run("P4", p4);
  run("P5", p5);
  run("P6", p6);
  run("P7", p7);
  run("P8", p8);
  run("P9", [&](Outcome & o) { p9(o, work.path); });

  bool all = true;
  for (const auto & [id, o] : results) {
    std::cout << id << " " << (o.pass ? "PASS" : "FAIL") << " " << o.detail.str() << "\n";
    all = all && o.pass;
  }
  std::cout << (all ? "ALL PASS" : "SOME FAILED") << "\n";
  return all ? 0 : 1;
}
