#pragma once

// Structural lints for the four-layer lattice.
//
//   R1   at least one stakeholder exists
//   R2   every stakeholder owns a goal, every goal has an owner
//   R3   every goal has a sub-goal, every sub-goal has a parent goal
//   R4   every NFR is attached, every sub-goal is covered by an NFR (warnings)
//   REF  every referenced id resolves in the adjacent layer
//   DUP  ids are unique across all four layers

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "nfr4/model.hpp"

namespace nfr4 {

enum class RuleId { R1, R2, R3, R4, REF, DUP };
enum class Severity { error, warning };

inline std::string_view to_string(RuleId r) {
  switch (r) {
    case RuleId::R1: return "R1";
    case RuleId::R2: return "R2";
    case RuleId::R3: return "R3";
    case RuleId::R4: return "R4";
    case RuleId::REF: return "REF";
    case RuleId::DUP: return "DUP";
  }
  return "?";
}

inline std::string_view to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

/// Severity is a function of the rule alone.
inline constexpr Severity severity_of(RuleId r) {
  return r == RuleId::R4 ? Severity::warning : Severity::error;
}

struct Diagnostic {
  RuleId rule_id;
  Severity severity;
  std::string message;
  std::string subject_id;
  std::optional<std::size_t> source_line;

  bool operator==(const Diagnostic&) const = default;
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

namespace detail {

struct Ranked {
  std::size_t line;
  std::size_t decl;
  Diagnostic diag;
};

class DiagnosticSink {
 public:
  void add(RuleId rule, std::string subject, std::string message, const Provenance& origin,
           std::size_t decl) {
    items_.push_back({origin.line.value_or(0), decl,
                      Diagnostic{rule, severity_of(rule), std::move(message), std::move(subject),
                                 origin.line}});
  }

  std::vector<Diagnostic> finish() && {
    std::stable_sort(items_.begin(), items_.end(), [](const Ranked& a, const Ranked& b) {
      return std::tie(a.line, a.decl, a.diag.rule_id) < std::tie(b.line, b.decl, b.diag.rule_id);
    });
    std::vector<Diagnostic> out;
    out.reserve(items_.size());
    for (auto& r : items_) out.push_back(std::move(r.diag));
    return out;
  }

 private:
  std::vector<Ranked> items_;
};

inline std::string ticked(std::string_view id) { return "'" + std::string(id) + "'"; }

}  // namespace detail

/// Reports every rule violation in `model`, ordered by declaration (source
/// line when known, otherwise layer order) and then rule id. Never throws on
/// malformed input; dangling references become REF diagnostics.
inline std::vector<Diagnostic> validate_structure(const Model& model) {
  using detail::ticked;
  detail::DiagnosticSink sink;

  // Global declaration index: stakeholders, goals, sub-goals, NFRs, orphan checks.
  const std::size_t goal_base = 1 + model.stakeholders.size();
  const std::size_t sub_base = goal_base + model.goals.size();
  const std::size_t nfr_base = sub_base + model.subgoals.size();
  const std::size_t check_base = nfr_base + model.nfrs.size();

  if (model.stakeholders.empty())
    sink.add(RuleId::R1, "system", "model declares no stakeholders", Provenance{}, 0);

  // DUP: the first declaration of an id wins, later ones are reported.
  std::unordered_map<std::string, std::string_view> first_layer;
  auto claim = [&](const std::string& id, std::string_view layer, const Provenance& origin,
                   std::size_t decl) {
    auto [it, inserted] = first_layer.emplace(id, layer);
    if (!inserted)
      sink.add(RuleId::DUP, id,
               "duplicate id " + ticked(id) + " (first declared as " + std::string(it->second) + ")",
               origin, decl);
  };

  for (std::size_t i = 0; i < model.stakeholders.size(); ++i) {
    const auto& s = model.stakeholders[i];
    claim(s.id, "stakeholder", s.origin, 1 + i);
    bool owns = std::any_of(model.goals.begin(), model.goals.end(), [&](const Goal& g) {
      return std::find(g.owners.begin(), g.owners.end(), s.id) != g.owners.end();
    });
    if (!owns) sink.add(RuleId::R2, s.id, "stakeholder " + ticked(s.id) + " owns no goal", s.origin, 1 + i);
  }

  for (std::size_t i = 0; i < model.goals.size(); ++i) {
    const auto& g = model.goals[i];
    const std::size_t decl = goal_base + i;
    claim(g.id, "goal", g.origin, decl);
    if (g.owners.empty()) sink.add(RuleId::R2, g.id, "goal " + ticked(g.id) + " has no owner", g.origin, decl);
    for (const auto& o : g.owners)
      if (!model.find_stakeholder(o))
        sink.add(RuleId::REF, g.id, "goal " + ticked(g.id) + " names unknown stakeholder " + ticked(o),
                 g.origin, decl);
    bool decomposed = std::any_of(model.subgoals.begin(), model.subgoals.end(), [&](const SubGoal& s) {
      return std::find(s.parents.begin(), s.parents.end(), g.id) != s.parents.end();
    });
    if (!decomposed)
      sink.add(RuleId::R3, g.id, "goal " + ticked(g.id) + " has no sub-goal", g.origin, decl);
  }

  for (std::size_t i = 0; i < model.subgoals.size(); ++i) {
    const auto& s = model.subgoals[i];
    const std::size_t decl = sub_base + i;
    claim(s.id, "sub-goal", s.origin, decl);
    if (s.parents.empty())
      sink.add(RuleId::R3, s.id, "sub-goal " + ticked(s.id) + " has no parent goal", s.origin, decl);
    for (const auto& p : s.parents)
      if (!model.find_goal(p))
        sink.add(RuleId::REF, s.id, "sub-goal " + ticked(s.id) + " names unknown goal " + ticked(p),
                 s.origin, decl);
    bool covered = std::any_of(model.nfrs.begin(), model.nfrs.end(), [&](const Nfr& n) {
      return std::find(n.attached_subgoals.begin(), n.attached_subgoals.end(), s.id) !=
             n.attached_subgoals.end();
    });
    if (!covered)
      sink.add(RuleId::R4, s.id, "sub-goal " + ticked(s.id) + " is not constrained by any NFR",
               s.origin, decl);
  }

  for (std::size_t i = 0; i < model.nfrs.size(); ++i) {
    const auto& n = model.nfrs[i];
    const std::size_t decl = nfr_base + i;
    claim(n.id, "NFR", n.origin, decl);
    if (!n.attached())
      sink.add(RuleId::R4, n.id, "NFR " + ticked(n.id) + " is attached to nothing", n.origin, decl);
    for (const auto& g : n.attached_goals)
      if (!model.find_goal(g))
        sink.add(RuleId::REF, n.id, "NFR " + ticked(n.id) + " is attached to unknown goal " + ticked(g),
                 n.origin, decl);
    for (const auto& s : n.attached_subgoals)
      if (!model.find_subgoal(s))
        sink.add(RuleId::REF, n.id, "NFR " + ticked(n.id) + " is attached to unknown sub-goal " + ticked(s),
                 n.origin, decl);
    for (const auto& t : n.unresolved_targets)
      sink.add(RuleId::REF, n.id,
               "NFR " + ticked(n.id) + " is attached to unknown goal or sub-goal " + ticked(t),
               n.origin, decl);
  }

  for (std::size_t i = 0; i < model.orphan_checks.size(); ++i) {
    const auto& c = model.orphan_checks[i];
    sink.add(RuleId::REF, c.nfr_id, "check names unknown NFR " + ticked(c.nfr_id), c.origin,
             check_base + i);
  }

  return std::move(sink).finish();
}

}  // namespace nfr4
