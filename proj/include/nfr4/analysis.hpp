#pragma once

// Quantitative procedures over a model: MCR completeness, checklist
// validation score, and the NFR x goal traceability matrix with its
// criticality ranking.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nfr4/model.hpp"
#include "nfr4/ratio.hpp"
#include "nfr4/validate.hpp"

namespace nfr4 {

class AnalysisError : public std::runtime_error {
 public:
  enum class Kind { empty_model, invalid_model, empty_matrix };

  AnalysisError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// ---------------------------------------------------------------------------
// Completeness

enum class ValidationStatus { validated_correct, not_yet_validated };

/// Validated iff all eight checklist questions are answered yes. A "no"
/// answer leaves the requirement in the not-yet-validated bucket.
inline ValidationStatus derive_status(const Nfr& nfr) {
  return nfr.checklist.count(Answer::yes) == checklist_size ? ValidationStatus::validated_correct
                                                            : ValidationStatus::not_yet_validated;
}

struct CompletenessResult {
  std::size_t n_c = 0;
  std::size_t n_nv = 0;

  bool operator==(const CompletenessResult&) const = default;

  Ratio mcr() const { return {n_c, n_c + n_nv}; }
};

/// MCR = n_c / (n_c + n_nv) over the model's NFRs.
inline CompletenessResult compute_mcr(const Model& model) {
  if (model.nfrs.empty())
    throw AnalysisError(AnalysisError::Kind::empty_model, "MCR is undefined for a model without NFRs");
  CompletenessResult r;
  for (const auto& n : model.nfrs) {
    if (derive_status(n) == ValidationStatus::validated_correct)
      ++r.n_c;
    else
      ++r.n_nv;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Checklist

struct ChecklistScore {
  std::optional<std::string> subject;  // empty for the whole model
  std::size_t yes_count = 0;
  std::size_t answered_count = 0;

  bool operator==(const ChecklistScore&) const = default;

  Ratio metric() const { return {yes_count, checklist_size}; }
};

inline ChecklistScore score_checklist(const Model& model, std::string_view nfr_id) {
  const Nfr* n = model.find_nfr(nfr_id);
  if (!n) throw UnknownIdError(std::string(nfr_id));
  return {std::string(nfr_id), n->checklist.count(Answer::yes),
          checklist_size - n->checklist.count(Answer::unanswered)};
}

/// Whole-model score: question q passes iff every NFR answers it yes, and
/// counts as answered iff every NFR answered it. A model without NFRs
/// scores 0/8.
inline ChecklistScore score_checklist(const Model& model) {
  ChecklistScore s;
  if (model.nfrs.empty()) return s;
  for (std::size_t q = 0; q < checklist_size; ++q) {
    bool all_yes = true;
    bool all_answered = true;
    for (const auto& n : model.nfrs) {
      all_yes = all_yes && n.checklist.answers[q] == Answer::yes;
      all_answered = all_answered && n.checklist.answers[q] != Answer::unanswered;
    }
    s.yes_count += all_yes ? 1 : 0;
    s.answered_count += all_answered ? 1 : 0;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Traceability

struct TraceabilityMatrix {
  std::vector<std::string> nfr_ids;
  std::vector<std::string> nfr_names;
  std::vector<std::string> goal_ids;
  std::vector<std::string> goal_names;
  std::vector<std::vector<bool>> marks;  // [nfr][goal]

  bool operator==(const TraceabilityMatrix&) const = default;

  std::size_t rows() const { return nfr_ids.size(); }
  std::size_t cols() const { return goal_ids.size(); }

  std::size_t row_sum(std::size_t row) const {
    return static_cast<std::size_t>(std::count(marks[row].begin(), marks[row].end(), true));
  }
};

/// NFR i marks goal j when it is attached to j directly or to a sub-goal
/// whose parents include j. Refuses models with error-severity diagnostics.
inline TraceabilityMatrix build_traceability_matrix(const Model& model) {
  for (const auto& d : validate_structure(model))
    if (d.severity == Severity::error)
      throw AnalysisError(AnalysisError::Kind::invalid_model,
                          "model has structural errors (first: " + d.message + ")");

  TraceabilityMatrix m;
  std::unordered_map<std::string_view, std::size_t> column;
  for (const auto& g : model.goals) {
    column.emplace(g.id, m.goal_ids.size());
    m.goal_ids.push_back(g.id);
    m.goal_names.push_back(g.display_name);
  }
  std::unordered_map<std::string_view, const SubGoal*> subgoal_by_id;
  for (const auto& s : model.subgoals) subgoal_by_id.emplace(s.id, &s);

  for (const auto& n : model.nfrs) {
    m.nfr_ids.push_back(n.id);
    m.nfr_names.push_back(n.display_name);
    std::vector<bool> row(m.cols(), false);
    for (const auto& g : n.attached_goals) row[column.at(g)] = true;
    for (const auto& s : n.attached_subgoals)
      for (const auto& p : subgoal_by_id.at(s)->parents) row[column.at(p)] = true;
    m.marks.push_back(std::move(row));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Criticality

/// How the critical set is cut from the row scores.
///   mean         score strictly above the arithmetic mean (default)
///   top_k=K      the K highest scores, ties broken by declaration order
///   absolute=T   score at least T
struct ThresholdMode {
  enum class Kind { mean, top_k, absolute };

  Kind kind = Kind::mean;
  std::size_t param = 0;

  bool operator==(const ThresholdMode&) const = default;

  static ThresholdMode mean() { return {}; }
  static ThresholdMode top_k(std::size_t k) { return {Kind::top_k, k}; }
  static ThresholdMode absolute(std::size_t t) { return {Kind::absolute, t}; }

  std::string to_string() const {
    switch (kind) {
      case Kind::mean: return "mean";
      case Kind::top_k: return "top_k=" + std::to_string(param);
      case Kind::absolute: return "absolute=" + std::to_string(param);
    }
    return "?";
  }

  /// Accepts "mean", "top_k=K" (K >= 1) and "absolute=T" (T >= 0).
  static std::optional<ThresholdMode> parse(std::string_view text) {
    if (text == "mean") return mean();
    auto eq = text.find('=');
    if (eq == std::string_view::npos) return std::nullopt;
    std::string_view name = text.substr(0, eq);
    std::string_view value = text.substr(eq + 1);
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) return std::nullopt;
    if (name == "top_k" && n >= 1) return top_k(n);
    if (name == "absolute") return absolute(n);
    return std::nullopt;
  }
};

struct CriticalityReport {
  std::vector<std::string> nfr_ids;
  std::vector<std::size_t> scores;  // row sums, declaration order
  ThresholdMode mode;
  Ratio threshold_value;
  std::vector<std::string> critical_set;  // descending score, then declaration order

  bool operator==(const CriticalityReport&) const = default;

  bool is_critical(std::string_view id) const {
    return std::find(critical_set.begin(), critical_set.end(), id) != critical_set.end();
  }
};

inline CriticalityReport rank_criticality(const TraceabilityMatrix& matrix,
                                          ThresholdMode mode = ThresholdMode::mean()) {
  if (matrix.rows() == 0 || matrix.cols() == 0)
    throw AnalysisError(AnalysisError::Kind::empty_matrix, "traceability matrix is empty");
  if (mode.kind == ThresholdMode::Kind::top_k && mode.param == 0)
    throw std::invalid_argument("top_k requires k >= 1");

  CriticalityReport r;
  r.nfr_ids = matrix.nfr_ids;
  r.mode = mode;
  for (std::size_t i = 0; i < matrix.rows(); ++i) r.scores.push_back(matrix.row_sum(i));

  std::vector<std::size_t> order(matrix.rows());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r.scores[a] > r.scores[b]; });

  const std::size_t n = r.scores.size();
  const std::size_t total = std::accumulate(r.scores.begin(), r.scores.end(), std::size_t{0});

  switch (mode.kind) {
    case ThresholdMode::Kind::mean:
      r.threshold_value = {total, n};
      for (std::size_t i : order)
        if (r.scores[i] * n > total) r.critical_set.push_back(r.nfr_ids[i]);
      break;
    case ThresholdMode::Kind::top_k: {
      std::size_t take = std::min(mode.param, n);
      for (std::size_t k = 0; k < take; ++k) r.critical_set.push_back(r.nfr_ids[order[k]]);
      r.threshold_value = {r.scores[order[take - 1]], 1};
      break;
    }
    case ThresholdMode::Kind::absolute:
      r.threshold_value = {mode.param, 1};
      for (std::size_t i : order)
        if (r.scores[i] >= mode.param) r.critical_set.push_back(r.nfr_ids[i]);
      break;
  }
  return r;
}

}  // namespace nfr4
