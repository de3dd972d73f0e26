#pragma once

// Four-layer requirements lattice: stakeholders -> goals -> sub-goals -> NFRs.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nfr4 {

/// Declaration line of an element in its source file.
///
/// Provenance is carried for diagnostics only and never takes part in
/// structural equality, so a parsed model compares equal to the same model
/// built in code or re-parsed from serialized text.
struct Provenance {
  std::optional<std::size_t> line;

  friend bool operator==(const Provenance&, const Provenance&) { return true; }
};

enum class Answer { unanswered, yes, no };

inline constexpr std::size_t checklist_size = 8;

/// The eight validation questions, in order (question n is index n - 1).
inline constexpr std::array<std::string_view, checklist_size> checklist_questions = {
    "Does each requirement have source?",
    "Is each requirement achievable in the technical environment that will house the system?",
    "Is each requirement testable once implemented?",
    "Is each requirement bounded and unambiguous?",
    "Do any requirements conflict with other requirements?",
    "Is the requirement traceable to goals of the system?",
    "Is the requirement bounded in quantitative terms?",
    "Are requirements stated clearly? Can they be misinterpreted?",
};

struct ChecklistRecord {
  std::array<Answer, checklist_size> answers{};
  std::array<std::optional<std::string>, checklist_size> notes{};

  bool operator==(const ChecklistRecord&) const = default;

  std::size_t count(Answer a) const {
    std::size_t n = 0;
    for (Answer x : answers) n += (x == a) ? 1 : 0;
    return n;
  }
};

struct Stakeholder {
  std::string id;
  std::string display_name;
  Provenance origin{};

  bool operator==(const Stakeholder&) const = default;
};

struct Goal {
  std::string id;
  std::string display_name;
  std::vector<std::string> owners;  // stakeholder ids
  Provenance origin{};

  bool operator==(const Goal&) const = default;
};

struct SubGoal {
  std::string id;
  std::string display_name;
  std::vector<std::string> parents;  // goal ids
  Provenance origin{};

  bool operator==(const SubGoal&) const = default;
};

/// A non-functional requirement. Attachment targets are kept exactly as
/// written; `attached_subgoals` and `attached_goals` are the resolved split,
/// while targets that resolve to neither land in `unresolved_targets`.
struct Nfr {
  std::string id;
  std::string display_name;
  std::vector<std::string> attached_subgoals;
  std::vector<std::string> attached_goals;
  std::vector<std::string> unresolved_targets;
  ChecklistRecord checklist{};
  Provenance origin{};

  bool operator==(const Nfr&) const = default;

  bool attached() const {
    return !attached_subgoals.empty() || !attached_goals.empty() || !unresolved_targets.empty();
  }
};

/// A `check` statement naming an NFR that is not declared.
struct OrphanCheck {
  std::string nfr_id;
  std::size_t question = 1;  // 1-based
  Answer answer = Answer::unanswered;
  Provenance origin{};

  bool operator==(const OrphanCheck&) const = default;
};

struct Model {
  std::string system_name;
  std::vector<Stakeholder> stakeholders;
  std::vector<Goal> goals;
  std::vector<SubGoal> subgoals;
  std::vector<Nfr> nfrs;
  std::vector<OrphanCheck> orphan_checks;
  std::optional<std::string> source_path;

  // source_path is provenance, like element lines.
  friend bool operator==(const Model& a, const Model& b) {
    return a.system_name == b.system_name && a.stakeholders == b.stakeholders &&
           a.goals == b.goals && a.subgoals == b.subgoals && a.nfrs == b.nfrs &&
           a.orphan_checks == b.orphan_checks;
  }

  const Stakeholder* find_stakeholder(std::string_view id) const { return find_in(stakeholders, id); }
  const Goal* find_goal(std::string_view id) const { return find_in(goals, id); }
  const SubGoal* find_subgoal(std::string_view id) const { return find_in(subgoals, id); }
  const Nfr* find_nfr(std::string_view id) const { return find_in(nfrs, id); }

 private:
  template <typename T>
  static const T* find_in(const std::vector<T>& items, std::string_view id) {
    for (const auto& item : items)
      if (item.id == id) return &item;
    return nullptr;
  }
};

class UnknownIdError : public std::out_of_range {
 public:
  explicit UnknownIdError(std::string id)
      : std::out_of_range("unknown id '" + id + "'"), id_(std::move(id)) {}

  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

/// Identifiers: a lowercase letter followed by lowercase letters, digits or underscores.
inline bool is_identifier(std::string_view s) {
  if (s.empty() || s.front() < 'a' || s.front() > 'z') return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

/// Splits raw `on` targets into goal, sub-goal and unresolved lists.
/// Goals are tried first; global id uniqueness makes the order irrelevant for
/// clean models.
inline void resolve_attachments(const Model& model, Nfr& nfr, const std::vector<std::string>& targets) {
  nfr.attached_goals.clear();
  nfr.attached_subgoals.clear();
  nfr.unresolved_targets.clear();
  for (const auto& t : targets) {
    if (model.find_goal(t))
      nfr.attached_goals.push_back(t);
    else if (model.find_subgoal(t))
      nfr.attached_subgoals.push_back(t);
    else
      nfr.unresolved_targets.push_back(t);
  }
}

// Layer traversal. Each throws UnknownIdError when the id does not resolve.

inline std::vector<Goal> goals_of_stakeholder(const Model& model, std::string_view stakeholder_id) {
  if (!model.find_stakeholder(stakeholder_id)) throw UnknownIdError(std::string(stakeholder_id));
  std::vector<Goal> out;
  for (const auto& g : model.goals)
    for (const auto& o : g.owners)
      if (o == stakeholder_id) {
        out.push_back(g);
        break;
      }
  return out;
}

inline std::vector<SubGoal> subgoals_of_goal(const Model& model, std::string_view goal_id) {
  if (!model.find_goal(goal_id)) throw UnknownIdError(std::string(goal_id));
  std::vector<SubGoal> out;
  for (const auto& s : model.subgoals)
    for (const auto& p : s.parents)
      if (p == goal_id) {
        out.push_back(s);
        break;
      }
  return out;
}

inline std::vector<Nfr> nfrs_of_subgoal(const Model& model, std::string_view subgoal_id) {
  if (!model.find_subgoal(subgoal_id)) throw UnknownIdError(std::string(subgoal_id));
  std::vector<Nfr> out;
  for (const auto& n : model.nfrs)
    for (const auto& s : n.attached_subgoals)
      if (s == subgoal_id) {
        out.push_back(n);
        break;
      }
  return out;
}

}  // namespace nfr4
