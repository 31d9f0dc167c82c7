// Small-instance oracle: every ordering of up to four occurrences of two
// events over a grid of instants, replayed through the state machine, must
// end where a direct evaluation of the propositions over the complete log
// says it should.

#include <gtest/gtest.h>

#include <chrono>

#include "symboleo/common/error.hpp"
#include "symboleo/core/parser.hpp"
#include "symboleo/runtime/instance.hpp"

namespace symboleo::runtime
{
namespace
{

using namespace std::chrono_literals;

Timestamp at(const char * text)
{
  return *parse_timestamp(text);
}

struct Occ
{
  int event;  // 0 -> e1, 1 -> e2
  Timestamp ts;
};

// Consequent forms over event `e` (other event `o` anchors windows).
enum class Form { Before, After, Within, Relative, Happens };
enum class Trigger { True, OnE1, OnViolatedO1 };

const Timestamp kBefore = at("2024-01-03");
const Timestamp kAfter = at("2024-01-02");
const Timestamp kWinStart = at("2024-01-02");
const Timestamp kWinEnd = at("2024-01-02");
const Timestamp kHorizon = at("2024-01-20");

std::string event_name(int e) { return e == 0 ? "e1" : "e2"; }

std::string form_text(Form f, int e)
{
  const auto n = event_name(e);
  switch (f) {
    case Form::Before: return "HappensBefore(" + n + ", 2024-01-03)";
    case Form::After: return "HappensAfter(" + n + ", 2024-01-02)";
    case Form::Within: return "HappensWithin(" + n + ", Interval(2024-01-02, 2024-01-02))";
    case Form::Relative: return "HappensWithin(" + n + ", RelativeTo(" + event_name(1 - e) + ", 1 days))";
    case Form::Happens: return "Happens(" + n + ")";
  }
  return "";
}

std::string trigger_text(Trigger t)
{
  switch (t) {
    case Trigger::True: return "true";
    case Trigger::OnE1: return "Happens(e1)";
    case Trigger::OnViolatedO1: return "Violated(O1)";
  }
  return "";
}

std::string spec_text(Form f1, Form f2, Trigger t2)
{
  return "Contract Small\n\nParameters\n  a : PartyA;\n  b : PartyB;\n\nDomain\n"
         "  PartyA isA Role with name : String;\n  PartyB isA Role with name : String;\n"
         "  E1 isA Event;\n  E2 isA Event;\n\nDeclarations\n  a : PartyA with name := a;\n"
         "  b : PartyB with name := b;\n  e1 : E1;\n  e2 : E2;\n\nObligations\n"
         "  O1 : Obligation(a, b, true, " + form_text(f1, 1) + ");\n"
         "  O2 : Obligation(b, a, " + trigger_text(t2) + ", " + form_text(f2, 0) + ");\n\n"
         "Powers\n\nendContract\n";
}

// Outcome of one consequent judged directly against the complete log.
std::string judge(Form f, int e, const std::vector<Occ> & log)
{
  auto any = [&](auto pred) {
    return std::any_of(log.begin(), log.end(), [&](const Occ & o) { return o.event == e && pred(o.ts); });
  };
  switch (f) {
    case Form::Before:
      return any([](Timestamp t) { return t < kBefore; }) ? "Fulfilled" : "Violated";
    case Form::After:
      return any([](Timestamp t) { return t >= kAfter + 24h; }) ? "Fulfilled" : "InEffect";
    case Form::Within:
      return any([](Timestamp t) { return t >= kWinStart && t < kWinEnd + 24h; }) ? "Fulfilled" : "Violated";
    case Form::Relative: {
      const auto anchor = std::find_if(log.begin(), log.end(), [&](const Occ & o) { return o.event == 1 - e; });
      if (anchor == log.end()) {
        return "InEffect";
      }
      const Timestamp end = anchor->ts + 24h + 1min;
      return any([&](Timestamp t) { return t >= anchor->ts && t < end; }) ? "Fulfilled" : "Violated";
    }
    case Form::Happens:
      return any([](Timestamp) { return true; }) ? "Fulfilled" : "InEffect";
  }
  return "";
}

struct Expected
{
  std::string o1;
  std::string o2;
  std::string contract;
};

Expected oracle(Form f1, Form f2, Trigger t2, const std::vector<Occ> & log)
{
  Expected x;
  x.o1 = judge(f1, 1, log);
  bool triggered = true;
  if (t2 == Trigger::OnE1) {
    triggered = std::any_of(log.begin(), log.end(), [](const Occ & o) { return o.event == 0; });
  } else if (t2 == Trigger::OnViolatedO1) {
    triggered = x.o1 == "Violated";
  }
  x.o2 = triggered ? judge(f2, 0, log) : "Created";
  x.contract = x.o1 == "Fulfilled" && x.o2 == "Fulfilled" ? "Fulfilled" : "InEffect";
  return x;
}

bool terminal(const std::string & s)
{
  return s == "Fulfilled" || s == "Violated";
}

TEST(runtime_oracle, exhaustive_orderings_match_direct_evaluation)
{
  const std::vector<Timestamp> grid{
    at("2024-01-01T00:00"), at("2024-01-02T00:00"), at("2024-01-02T23:59"), at("2024-01-03T00:00"),
    at("2024-01-03T00:01")};
  std::vector<Occ> symbols;
  for (int e = 0; e < 2; ++e) {
    for (const auto & t : grid) {
      symbols.push_back({e, t});
    }
  }
  // Every chronological sequence of up to four occurrences; same-instant
  // occurrences appear in every submission order.
  std::vector<std::vector<Occ>> logs{{}};
  for (std::size_t len = 1; len <= 4; ++len) {
    std::vector<std::size_t> idx(len, 0);
    while (true) {
      std::vector<Occ> log;
      bool sorted = true;
      for (std::size_t k = 0; k < len; ++k) {
        log.push_back(symbols[idx[k]]);
        sorted = sorted && (k == 0 || log[k - 1].ts <= log[k].ts);
      }
      if (sorted) {
        logs.push_back(log);
      }
      std::size_t k = 0;
      while (k < len && ++idx[k] == symbols.size()) {
        idx[k++] = 0;
      }
      if (k == len) {
        break;
      }
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::size_t runs = 0;
  for (Form f1 : {Form::Before, Form::After, Form::Within, Form::Relative, Form::Happens}) {
    for (Form f2 : {Form::Before, Form::Within, Form::Relative, Form::Happens}) {
      for (Trigger t2 : {Trigger::True, Trigger::OnE1, Trigger::OnViolatedO1}) {
        const auto parsed = parse(spec_text(f1, f2, t2));
        ASSERT_TRUE(parsed.spec) << spec_text(f1, f2, t2);
        const auto c = std::make_shared<const CompiledContract>(compile(*parsed.spec, {{"a", "A"}, {"b", "B"}}));
        for (const auto & log : logs) {
          ContractInstance inst{c, grid.front()};
          Timestamp last = inst.status().clock;
          std::map<std::string, std::string> seen;
          auto check_monotone = [&] {
            const auto s = inst.status();
            ASSERT_GE(s.clock, last);
            last = s.clock;
            for (const auto & [id, st] : s.obligations) {
              const std::string now{to_string(st)};
              if (terminal(seen[id])) {
                ASSERT_EQ(now, seen[id]) << id << " left a terminal state";
              }
              seen[id] = now;
            }
          };
          for (const auto & o : log) {
            inst.submit_event(event_name(o.event), o.ts, nlohmann::json::object());
            check_monotone();
          }
          inst.tick(kHorizon);
          check_monotone();
          ++runs;

          const auto x = oracle(f1, f2, t2, log);
          const auto s = inst.status();
          std::string trace;
          for (const auto & o : log) {
            trace += event_name(o.event) + "@" + format_timestamp(o.ts) + " ";
          }
          ASSERT_EQ(to_string(s.obligations[0].second), x.o1) << spec_text(f1, f2, t2) << trace;
          ASSERT_EQ(to_string(s.obligations[1].second), x.o2) << spec_text(f1, f2, t2) << trace;
          ASSERT_EQ(to_string(s.state), x.contract) << spec_text(f1, f2, t2) << trace;
        }
      }
    }
  }
  EXPECT_GT(runs, 50000u);
  EXPECT_LT(std::chrono::steady_clock::now() - t0, std::chrono::seconds(30));
}

}  // namespace
}  // namespace symboleo::runtime
