#pragma once

// Command-line driver: parse -> validate -> analyse -> report.
//
// Exit codes
//   0   success
//   1   `check` found parse errors or error diagnostics (or warnings with --strict)
//   2   analysis command on an invalid model
//   3   analysis precondition violated (no NFRs)
//   64  bad usage
//   66  input not readable

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "nfr4/analysis.hpp"
#include "nfr4/dsl.hpp"
#include "nfr4/report.hpp"
#include "nfr4/validate.hpp"

namespace nfr4::cli {

enum class Command { check, metrics, matrix, critical, report };

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int check_failed = 1;
inline constexpr int invalid_model = 2;
inline constexpr int precondition = 3;
inline constexpr int usage = 64;
inline constexpr int no_input = 66;
}  // namespace exit_code

struct CliConfig {
  std::string input_path;
  Command command = Command::check;
  OutputFormat format = OutputFormat::text;
  ThresholdMode mode = ThresholdMode::mean();
  bool strict = false;
  bool legend = true;
};

/// Returns a config, or the exit code to stop with (help or usage error).
inline std::variant<CliConfig, int> parse_command_line(int argc, const char* const* argv, std::ostream& out,
                                                       std::ostream& err) {
  CLI::App app{"Four-layer NFR analysis: lint, metrics, traceability and criticality"};
  app.name("nfr4");

  const std::map<std::string, Command> commands{{"check", Command::check},
                                                {"metrics", Command::metrics},
                                                {"matrix", Command::matrix},
                                                {"critical", Command::critical},
                                                {"report", Command::report}};
  const std::map<std::string, OutputFormat> formats{
      {"text", OutputFormat::text}, {"markdown", OutputFormat::markdown}, {"json", OutputFormat::json}};

  CliConfig config;
  std::string mode_text = "mean";
  app.add_option("command", config.command, "check | metrics | matrix | critical | report")
      ->required()
      ->transform(CLI::CheckedTransformer(commands));
  app.add_option("input", config.input_path, "model file (.nfr4), or - for standard input")->required();
  app.add_option("--format", config.format, "text | markdown | json")
      ->transform(CLI::CheckedTransformer(formats));
  app.add_option("--mode", mode_text, "criticality threshold: mean | top_k=K | absolute=T")
      ->check(CLI::Validator(
          [](std::string& s) {
            return ThresholdMode::parse(s) ? std::string{} : "expected mean, top_k=K (K>=1) or absolute=T";
          },
          "MODE"));
  app.add_flag("--strict", config.strict, "treat warnings as failures");
  app.add_flag("--legend,!--no-legend", config.legend, "print the goal legend under the matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "nfr4: " << e.what() << "\nRun with --help for usage.\n";
    return exit_code::usage;
  }
  config.mode = *ThresholdMode::parse(mode_text);
  return config;
}

namespace detail {

inline void print_diagnostics(std::ostream& err, const std::string& path, const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) {
    err << path;
    if (d.source_line) err << ':' << *d.source_line;
    err << ": " << to_string(d.severity) << '[' << to_string(d.rule_id) << "]: " << d.message << '\n';
  }
}

inline int run_analysis(const CliConfig& config, const Model& model, std::ostream& out) {
  using json = nlohmann::ordered_json;
  const bool as_json = config.format == OutputFormat::json;
  switch (config.command) {
    case Command::metrics: {
      auto completeness = compute_mcr(model);
      auto whole = score_checklist(model);
      if (as_json) {
        std::vector<ChecklistScore> per;
        for (const auto& n : model.nfrs) per.push_back(score_checklist(model, n.id));
        json j;
        j["mcr"] = mcr_json(completeness);
        j["checklist"] = checklist_json(whole, per);
        out << j.dump(2) << '\n';
      } else {
        out << nfr4::detail::mcr_line(completeness) << '\n'
            << "validation: " << nfr4::detail::checklist_fraction(whole) << " = " << whole.metric().fixed()
            << '\n';
      }
      return exit_code::ok;
    }
    case Command::matrix: {
      auto matrix = build_traceability_matrix(model);
      auto crit = rank_criticality(matrix, config.mode);
      if (as_json) {
        json j;
        j["matrix"] = matrix_json(matrix);
        out << j.dump(2) << '\n';
      } else {
        out << render_matrix_table(matrix, crit, config.legend);
      }
      return exit_code::ok;
    }
    case Command::critical: {
      auto matrix = build_traceability_matrix(model);
      auto crit = rank_criticality(matrix, config.mode);
      if (as_json) {
        json j;
        j["criticality"] = criticality_json(crit);
        out << j.dump(2) << '\n';
        return exit_code::ok;
      }
      out << "scores\n";
      for (std::size_t i = 0; i < matrix.rows(); ++i)
        out << "  " << matrix.nfr_names[i] << ": " << crit.scores[i]
            << (crit.is_critical(matrix.nfr_ids[i]) ? " *" : "") << '\n';
      out << "threshold: " << nfr4::detail::threshold_label(crit) << '\n' << "critical:";
      for (std::size_t k = 0; k < crit.critical_set.size(); ++k)
        out << (k ? ", " : " ") << matrix.nfr_names[nfr4::detail::row_of(matrix, crit.critical_set[k])];
      out << '\n';
      return exit_code::ok;
    }
    case Command::report: {
      auto bundle = make_report(model, config.mode);
      out << (as_json ? export_json(bundle) : render_summary(bundle, config.format));
      return exit_code::ok;
    }
    case Command::check: break;
  }
  return exit_code::ok;
}

}  // namespace detail

/// Runs one command. Human output goes to `out`, diagnostics and errors to `err`.
inline int run(const CliConfig& config, std::istream& in, std::ostream& out, std::ostream& err) {
  std::string text;
  std::string display_path = config.input_path == "-" ? "<stdin>" : config.input_path;
  if (config.input_path == "-") {
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    std::ifstream file(config.input_path, std::ios::binary);
    if (!file) {
      err << "nfr4: cannot read '" << config.input_path << "'\n";
      return exit_code::no_input;
    }
    text.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
  }

  const bool is_check = config.command == Command::check;
  auto parsed = parse(text, display_path);
  if (auto* errors = std::get_if<std::vector<ParseError>>(&parsed)) {
    for (const auto& e : *errors)
      err << display_path << ':' << e.span.line << ':' << e.span.column << ": error[" << to_string(e.kind)
          << "]: " << e.message << '\n';
    return is_check ? exit_code::check_failed : exit_code::invalid_model;
  }
  const Model& model = std::get<Model>(parsed);

  auto diags = validate_structure(model);
  detail::print_diagnostics(err, display_path, diags);
  const bool failed = has_errors(diags) || (config.strict && !diags.empty());

  if (is_check) {
    std::size_t errors = 0;
    for (const auto& d : diags) errors += d.severity == Severity::error ? 1 : 0;
    if (config.format == OutputFormat::json) {
      nlohmann::ordered_json j;
      j["diagnostics"] = diagnostics_json(diags);
      out << j.dump(2) << '\n';
    } else {
      out << display_path << ": " << (failed ? "failed" : "ok") << " (" << errors << " errors, "
          << diags.size() - errors << " warnings)\n";
    }
    return failed ? exit_code::check_failed : exit_code::ok;
  }

  if (failed) {
    err << "nfr4: model is invalid; run 'nfr4 check' for details\n";
    return exit_code::invalid_model;
  }

  try {
    return detail::run_analysis(config, model, out);
  } catch (const AnalysisError& e) {
    err << "nfr4: " << e.what() << '\n';
    return e.kind() == AnalysisError::Kind::invalid_model ? exit_code::invalid_model : exit_code::precondition;
  }
}

inline int main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  auto config = parse_command_line(argc, argv, out, err);
  if (auto* code = std::get_if<int>(&config)) return *code;
  return run(std::get<CliConfig>(config), in, out, err);
}

}  // namespace nfr4::cli
