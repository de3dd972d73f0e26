#pragma once

// Text, Markdown and JSON renderings of an analysed model.

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nfr4/analysis.hpp"
#include "nfr4/model.hpp"
#include "nfr4/validate.hpp"

namespace nfr4 {

struct ReportBundle {
  std::string system_name;
  std::vector<std::string> stakeholder_ids;
  std::vector<std::string> goal_ids;
  std::vector<std::string> subgoal_ids;
  std::vector<std::string> nfr_ids;
  std::vector<Diagnostic> diagnostics;
  CompletenessResult completeness;
  ChecklistScore checklist;
  std::vector<ChecklistScore> per_nfr;
  TraceabilityMatrix matrix;
  CriticalityReport criticality;

  bool operator==(const ReportBundle&) const = default;
};

/// Computes every part of the report from one model. Throws AnalysisError
/// when the model has structural errors or no NFRs.
inline ReportBundle make_report(const Model& model, ThresholdMode mode = ThresholdMode::mean()) {
  ReportBundle b;
  b.system_name = model.system_name;
  for (const auto& s : model.stakeholders) b.stakeholder_ids.push_back(s.id);
  for (const auto& g : model.goals) b.goal_ids.push_back(g.id);
  for (const auto& s : model.subgoals) b.subgoal_ids.push_back(s.id);
  for (const auto& n : model.nfrs) b.nfr_ids.push_back(n.id);
  b.diagnostics = validate_structure(model);
  b.matrix = build_traceability_matrix(model);
  b.completeness = compute_mcr(model);
  b.checklist = score_checklist(model);
  for (const auto& n : model.nfrs) b.per_nfr.push_back(score_checklist(model, n.id));
  b.criticality = rank_criticality(b.matrix, mode);
  return b;
}

enum class OutputFormat { text, markdown, json };

namespace detail {

inline std::string pad(std::string_view s, std::size_t width) {
  std::string out(s);
  if (out.size() < width) out.append(width - out.size(), ' ');
  return out;
}

inline std::string rtrim(std::string s) {
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

inline std::string md_cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

inline std::string threshold_label(const CriticalityReport& c) {
  switch (c.mode.kind) {
    case ThresholdMode::Kind::mean: return "mean > " + c.threshold_value.fixed();
    case ThresholdMode::Kind::top_k: return c.mode.to_string() + ", score >= " + c.threshold_value.fixed(0);
    case ThresholdMode::Kind::absolute: return "absolute, score >= " + c.threshold_value.fixed(0);
  }
  return {};
}

inline std::string mcr_line(const CompletenessResult& c) {
  return "MCR = " + std::to_string(c.n_c) + " / [" + std::to_string(c.n_c) + "+" + std::to_string(c.n_nv) +
         "] = " + c.mcr().fixed();
}

inline std::string checklist_fraction(const ChecklistScore& s) {
  return std::to_string(s.yes_count) + "/" + std::to_string(checklist_size);
}

inline std::string diagnostic_line(const Diagnostic& d) {
  std::string out = std::string(to_string(d.severity)) + " " + std::string(to_string(d.rule_id)) + " " + d.subject_id;
  if (d.source_line) out += " (line " + std::to_string(*d.source_line) + ")";
  return out + ": " + d.message;
}

inline std::size_t row_of(const TraceabilityMatrix& m, std::string_view id) {
  return static_cast<std::size_t>(std::find(m.nfr_ids.begin(), m.nfr_ids.end(), id) - m.nfr_ids.begin());
}

}  // namespace detail

/// Fixed-width table: NFR names down the side, G1..Gm across, then score and
/// a `*` for critical rows. An optional legend maps Gj to goal names.
inline std::string render_matrix_table(const TraceabilityMatrix& matrix, const CriticalityReport& criticality,
                                       bool legend = true) {
  using detail::pad;
  if (matrix.rows() == 0 || matrix.cols() == 0)
    throw AnalysisError(AnalysisError::Kind::empty_matrix, "traceability matrix is empty");

  std::size_t name_width = 3;
  for (const auto& n : matrix.nfr_names) name_width = std::max(name_width, n.size());

  std::ostringstream os;
  std::string header = pad("NFR", name_width);
  for (std::size_t j = 0; j < matrix.cols(); ++j) header += "  G" + std::to_string(j + 1);
  header += "  score  critical";
  os << header << '\n';

  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    std::string line = pad(matrix.nfr_names[i], name_width);
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      std::size_t width = 1 + std::to_string(j + 1).size();
      line += "  " + pad(matrix.marks[i][j] ? "X" : "", width);
    }
    std::string score = std::to_string(matrix.row_sum(i));
    line += "  " + std::string(score.size() < 5 ? 5 - score.size() : 0, ' ') + score;
    line += criticality.is_critical(matrix.nfr_ids[i]) ? "  *" : "";
    os << detail::rtrim(line) << '\n';
  }

  if (legend) {
    os << '\n';
    for (std::size_t j = 0; j < matrix.cols(); ++j)
      os << 'G' << (j + 1) << " = " << matrix.goal_names[j] << '\n';
  }
  return os.str();
}

namespace detail {

inline std::string render_text(const ReportBundle& b) {
  std::ostringstream os;
  os << "Model\n"
     << "  system: " << b.system_name << '\n'
     << "  stakeholders: " << b.stakeholder_ids.size() << '\n'
     << "  goals: " << b.goal_ids.size() << '\n'
     << "  sub-goals: " << b.subgoal_ids.size() << '\n'
     << "  NFRs: " << b.nfr_ids.size() << "\n\n";

  os << "Diagnostics\n";
  if (b.diagnostics.empty()) os << "  none\n";
  for (const auto& d : b.diagnostics) os << "  " << diagnostic_line(d) << '\n';
  os << '\n';

  os << "Completeness\n  " << mcr_line(b.completeness) << "\n\n";

  os << "Validation\n  validation: " << checklist_fraction(b.checklist) << " = " << b.checklist.metric().fixed()
     << '\n';
  for (const auto& s : b.per_nfr)
    os << "  " << s.subject.value_or("") << ": " << checklist_fraction(s) << " (" << s.answered_count
       << " answered)\n";
  os << '\n';

  os << "Traceability\n" << render_matrix_table(b.matrix, b.criticality) << '\n';

  os << "Critical NFRs (" << threshold_label(b.criticality) << ")\n";
  if (b.criticality.critical_set.empty()) os << "  none\n";
  for (const auto& id : b.criticality.critical_set) {
    std::size_t row = row_of(b.matrix, id);
    os << "  " << b.matrix.nfr_names[row] << " (" << b.criticality.scores[row] << ")\n";
  }
  return os.str();
}

inline std::string render_markdown(const ReportBundle& b) {
  std::ostringstream os;
  os << "# NFR analysis: " << b.system_name << "\n\n";

  os << "## Model\n\n| layer | count |\n|---|---|\n"
     << "| stakeholders | " << b.stakeholder_ids.size() << " |\n"
     << "| goals | " << b.goal_ids.size() << " |\n"
     << "| sub-goals | " << b.subgoal_ids.size() << " |\n"
     << "| NFRs | " << b.nfr_ids.size() << " |\n\n";

  os << "## Diagnostics\n\n";
  if (b.diagnostics.empty()) os << "_none_\n";
  for (const auto& d : b.diagnostics) {
    os << "- " << to_string(d.severity) << " `" << to_string(d.rule_id) << "` `" << d.subject_id << '`';
    if (d.source_line) os << " (line " << *d.source_line << ')';
    os << ": " << d.message << '\n';
  }
  os << '\n';

  os << "## Completeness\n\n`" << mcr_line(b.completeness) << "`\n\n";

  os << "## Validation\n\nWhole model: `" << checklist_fraction(b.checklist) << " = "
     << b.checklist.metric().fixed() << "`\n\n| NFR | yes | answered | metric |\n|---|---|---|---|\n";
  for (const auto& s : b.per_nfr)
    os << "| " << s.subject.value_or("") << " | " << s.yes_count << " | " << s.answered_count << " | "
       << s.metric().fixed() << " |\n";
  os << '\n';

  const auto& m = b.matrix;
  os << "## Traceability\n\n| NFR |";
  for (std::size_t j = 0; j < m.cols(); ++j) os << " G" << (j + 1) << " |";
  os << " score | critical |\n|---|";
  for (std::size_t j = 0; j < m.cols(); ++j) os << "---|";
  os << "---|---|\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << "| " << md_cell(m.nfr_names[i]) << " |";
    for (std::size_t j = 0; j < m.cols(); ++j) os << (m.marks[i][j] ? " X |" : "  |");
    os << ' ' << m.row_sum(i) << " | " << (b.criticality.is_critical(m.nfr_ids[i]) ? "*" : "") << " |\n";
  }
  os << '\n';
  for (std::size_t j = 0; j < m.cols(); ++j) os << "- G" << (j + 1) << ": " << m.goal_names[j] << '\n';
  os << '\n';

  os << "## Critical NFRs\n\nThreshold: " << threshold_label(b.criticality) << "\n\n";
  if (b.criticality.critical_set.empty()) os << "_none_\n";
  for (const auto& id : b.criticality.critical_set) {
    std::size_t row = row_of(m, id);
    os << "- " << m.nfr_names[row] << " (" << b.criticality.scores[row] << ")\n";
  }
  return os.str();
}

}  // namespace detail

/// Deterministic human-readable report ending in a single newline.
inline std::string render_summary(const ReportBundle& bundle, OutputFormat format = OutputFormat::text) {
  return format == OutputFormat::markdown ? detail::render_markdown(bundle) : detail::render_text(bundle);
}

// JSON sections are also emitted on their own by the CLI's narrower commands.

inline nlohmann::ordered_json diagnostics_json(const std::vector<Diagnostic>& diags) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& d : diags) {
    nlohmann::ordered_json j;
    j["rule"] = to_string(d.rule_id);
    j["severity"] = to_string(d.severity);
    j["subject"] = d.subject_id;
    j["line"] = d.source_line ? nlohmann::ordered_json(*d.source_line) : nlohmann::ordered_json(nullptr);
    j["message"] = d.message;
    out.push_back(std::move(j));
  }
  return out;
}

inline nlohmann::ordered_json mcr_json(const CompletenessResult& c) {
  nlohmann::ordered_json j;
  j["n_c"] = c.n_c;
  j["n_nv"] = c.n_nv;
  j["value"] = c.mcr().fixed();
  return j;
}

inline nlohmann::ordered_json checklist_json(const ChecklistScore& whole, const std::vector<ChecklistScore>& per_nfr) {
  auto score = [](const ChecklistScore& s) {
    nlohmann::ordered_json j;
    j["yes"] = s.yes_count;
    j["answered"] = s.answered_count;
    j["value"] = s.metric().fixed();
    return j;
  };
  nlohmann::ordered_json j;
  j["whole_model"] = score(whole);
  j["per_nfr"] = nlohmann::ordered_json::object();
  for (const auto& s : per_nfr) j["per_nfr"][s.subject.value_or("")] = score(s);
  return j;
}

inline nlohmann::ordered_json matrix_json(const TraceabilityMatrix& m) {
  nlohmann::ordered_json j;
  j["nfr_ids"] = m.nfr_ids;
  j["goal_ids"] = m.goal_ids;
  auto marks = nlohmann::ordered_json::array();
  for (const auto& row : m.marks) {
    auto r = nlohmann::ordered_json::array();
    for (bool b : row) r.push_back(b);
    marks.push_back(std::move(r));
  }
  j["marks"] = std::move(marks);
  return j;
}

inline nlohmann::ordered_json criticality_json(const CriticalityReport& c) {
  nlohmann::ordered_json j;
  j["scores"] = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < c.nfr_ids.size(); ++i) j["scores"][c.nfr_ids[i]] = c.scores[i];
  j["threshold_mode"] = c.mode.to_string();
  j["threshold_value"] = c.threshold_value.fixed();
  j["critical"] = c.critical_set;
  return j;
}

/// Single JSON object with keys in fixed order; ratios are 4-place decimal strings.
inline std::string export_json(const ReportBundle& b) {
  nlohmann::ordered_json j;
  j["system"] = b.system_name;
  auto layer = [](const std::vector<std::string>& ids) {
    nlohmann::ordered_json l;
    l["count"] = ids.size();
    l["ids"] = ids;
    return l;
  };
  j["layers"]["stakeholders"] = layer(b.stakeholder_ids);
  j["layers"]["goals"] = layer(b.goal_ids);
  j["layers"]["subgoals"] = layer(b.subgoal_ids);
  j["layers"]["nfrs"] = layer(b.nfr_ids);
  j["diagnostics"] = diagnostics_json(b.diagnostics);
  j["mcr"] = mcr_json(b.completeness);
  j["checklist"] = checklist_json(b.checklist, b.per_nfr);
  j["matrix"] = matrix_json(b.matrix);
  j["criticality"] = criticality_json(b.criticality);
  return j.dump(2) + "\n";
}

}  // namespace nfr4
