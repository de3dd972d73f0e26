#pragma once

// Line-oriented text format for four-layer models (`.nfr4` files).
//
//   # comment
//   system "Library management system"
//   stakeholder member "Member"
//   goal search_book "Search book" for member
//   subgoal search_by_isbn "Search book by ISBN" of search_book
//   nfr usability "Usability" on search_book, search_by_isbn
//   check usability 1 yes
//
// One statement per line. Display names are double-quoted with no escapes.
// A `#` starts a comment unless it sits inside a quoted name.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nfr4/model.hpp"
#include "nfr4/validate.hpp"

namespace nfr4 {

struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;

  bool operator==(const SourceSpan&) const = default;
};

enum class ParseErrorKind {
  unknown_keyword,
  malformed_line,
  bad_identifier,
  unterminated_string,
  duplicate_system,
  missing_system,
  bad_checklist_index,
  bad_checklist_answer,
};

inline std::string_view to_string(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::unknown_keyword: return "unknown-keyword";
    case ParseErrorKind::malformed_line: return "malformed-line";
    case ParseErrorKind::bad_identifier: return "bad-identifier";
    case ParseErrorKind::unterminated_string: return "unterminated-string";
    case ParseErrorKind::duplicate_system: return "duplicate-system";
    case ParseErrorKind::missing_system: return "missing-system";
    case ParseErrorKind::bad_checklist_index: return "bad-checklist-index";
    case ParseErrorKind::bad_checklist_answer: return "bad-checklist-answer";
  }
  return "?";
}

struct ParseError {
  SourceSpan span;
  ParseErrorKind kind;
  std::string message;

  bool operator==(const ParseError&) const = default;
};

using ParseResult = std::variant<Model, std::vector<ParseError>>;

class SerializeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

enum class TokenKind { word, string, comma };

struct Token {
  TokenKind kind;
  std::string text;  // string tokens hold the unquoted contents
  std::size_t column;
};

struct LineFailure {
  ParseErrorKind kind;
  std::size_t column;
  std::string message;
};

using Tokens = std::vector<Token>;

inline bool is_blank(char c) { return c == ' ' || c == '\t'; }

/// Splits one line into tokens, stopping at a comment.
inline std::variant<Tokens, LineFailure> tokenize(std::string_view line) {
  Tokens out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (is_blank(c)) {
      ++i;
    } else if (c == '#') {
      break;
    } else if (c == ',') {
      out.push_back({TokenKind::comma, ",", i + 1});
      ++i;
    } else if (c == '"') {
      std::size_t close = line.find('"', i + 1);
      if (close == std::string_view::npos)
        return LineFailure{ParseErrorKind::unterminated_string, i + 1,
                           "unterminated string " + std::string(line.substr(i))};
      out.push_back({TokenKind::string, std::string(line.substr(i + 1, close - i - 1)), i + 1});
      i = close + 1;
    } else {
      std::size_t start = i;
      while (i < line.size() && !is_blank(line[i]) && line[i] != '"' && line[i] != ',' && line[i] != '#')
        ++i;
      out.push_back({TokenKind::word, std::string(line.substr(start, i - start)), start + 1});
    }
  }
  return out;
}

struct Statement {
  std::string keyword;
  std::string id;
  std::string name;
  std::vector<std::string> refs;
  std::size_t question = 0;
  Answer answer = Answer::unanswered;
  std::optional<std::string> note;
};

/// Cursor over a line's tokens. Every expect_* returns a failure on mismatch.
class LineReader {
 public:
  LineReader(const Tokens& tokens, std::size_t line_length)
      : tokens_(tokens), eol_column_(line_length + 1) {}

  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token* peek() const { return at_end() ? nullptr : &tokens_[pos_]; }
  std::size_t column() const { return at_end() ? eol_column_ : tokens_[pos_].column; }

  std::optional<LineFailure> expect_id(std::string& out, std::string_view what) {
    const Token* t = peek();
    if (!t || t->kind != TokenKind::word)
      return LineFailure{ParseErrorKind::malformed_line, column(), "expected " + std::string(what)};
    if (!is_identifier(t->text))
      return LineFailure{ParseErrorKind::bad_identifier, t->column,
                         "bad identifier '" + t->text + "'"};
    out = t->text;
    ++pos_;
    return std::nullopt;
  }

  std::optional<LineFailure> expect_name(std::string& out) {
    const Token* t = peek();
    if (!t || t->kind != TokenKind::string)
      return LineFailure{ParseErrorKind::malformed_line, column(), "expected quoted display name"};
    if (t->text.empty())
      return LineFailure{ParseErrorKind::malformed_line, t->column, "empty display name \"\""};
    out = t->text;
    ++pos_;
    return std::nullopt;
  }

  std::optional<LineFailure> expect_word(std::string_view word) {
    const Token* t = peek();
    if (!t || t->kind != TokenKind::word || t->text != word)
      return LineFailure{ParseErrorKind::malformed_line, column(),
                         "expected '" + std::string(word) + "'" + found()};
    ++pos_;
    return std::nullopt;
  }

  std::optional<LineFailure> expect_id_list(std::vector<std::string>& out) {
    for (;;) {
      std::string id;
      if (auto f = expect_id(id, "identifier")) return f;
      out.push_back(std::move(id));
      const Token* t = peek();
      if (!t || t->kind != TokenKind::comma) return std::nullopt;
      ++pos_;
    }
  }

  std::optional<LineFailure> expect_end() {
    if (at_end()) return std::nullopt;
    return LineFailure{ParseErrorKind::malformed_line, column(), "unexpected trailing" + found()};
  }

  const Token* take() { return at_end() ? nullptr : &tokens_[pos_++]; }

 private:
  std::string found() const {
    const Token* t = peek();
    if (!t) return ", found end of line";
    return t->kind == TokenKind::string ? ", found \"" + t->text + "\"" : ", found '" + t->text + "'";
  }

  const Tokens& tokens_;
  std::size_t pos_ = 0;
  std::size_t eol_column_;
};

inline std::variant<Statement, LineFailure> parse_statement(const Tokens& tokens, std::size_t line_length) {
  LineReader r(tokens, line_length);
  Statement st;
  const Token* kw = r.take();
  if (kw->kind != TokenKind::word)
    return LineFailure{ParseErrorKind::malformed_line, kw->column, "expected a keyword"};
  st.keyword = kw->text;

  std::optional<LineFailure> f;
  if (st.keyword == "system") {
    if ((f = r.expect_name(st.name)) || (f = r.expect_end())) return *f;
  } else if (st.keyword == "stakeholder") {
    if ((f = r.expect_id(st.id, "identifier")) || (f = r.expect_name(st.name)) || (f = r.expect_end()))
      return *f;
  } else if (st.keyword == "goal" || st.keyword == "subgoal" || st.keyword == "nfr") {
    if ((f = r.expect_id(st.id, "identifier")) || (f = r.expect_name(st.name))) return *f;
    std::string_view link = st.keyword == "goal" ? "for" : st.keyword == "subgoal" ? "of" : "on";
    // An NFR may be declared without attachments; that is a lint, not a syntax error.
    if (st.keyword == "nfr" && r.at_end()) return st;
    if ((f = r.expect_word(link)) || (f = r.expect_id_list(st.refs)) || (f = r.expect_end())) return *f;
  } else if (st.keyword == "check") {
    if ((f = r.expect_id(st.id, "NFR identifier"))) return *f;
    const Token* n = r.take();
    if (!n) return LineFailure{ParseErrorKind::malformed_line, line_length + 1, "expected question number"};
    bool digits = n->kind == TokenKind::word && !n->text.empty() && n->text.size() <= 3 &&
                  n->text.find_first_not_of("0123456789") == std::string::npos;
    std::size_t q = digits ? std::stoul(n->text) : 0;
    if (q < 1 || q > checklist_size)
      return LineFailure{ParseErrorKind::bad_checklist_index, n->column,
                         "checklist question '" + n->text + "' is not in 1..8"};
    st.question = q;
    const Token* a = r.take();
    if (!a) return LineFailure{ParseErrorKind::malformed_line, line_length + 1, "expected yes or no"};
    if (a->kind == TokenKind::word && a->text == "yes")
      st.answer = Answer::yes;
    else if (a->kind == TokenKind::word && a->text == "no")
      st.answer = Answer::no;
    else
      return LineFailure{ParseErrorKind::bad_checklist_answer, a->column,
                         "checklist answer '" + a->text + "' is not yes or no"};
    if (const Token* t = r.peek(); t && t->kind == TokenKind::string) {
      st.note = t->text;
      r.take();
    }
    if ((f = r.expect_end())) return *f;
  } else {
    return LineFailure{ParseErrorKind::unknown_keyword, kw->column, "unknown keyword '" + kw->text + "'"};
  }
  return st;
}

}  // namespace detail

/// Parses a model. All syntax errors are collected (at most one per line);
/// reference problems are left for validate_structure().
inline ParseResult parse(std::string_view source, std::optional<std::string> source_path = std::nullopt) {
  using namespace detail;
  std::vector<ParseError> errors;
  Model model;
  model.source_path = std::move(source_path);

  struct PendingCheck {
    Statement st;
    std::size_t line;
  };
  std::vector<PendingCheck> checks;
  std::vector<std::vector<std::string>> nfr_targets;

  std::optional<std::size_t> system_line;
  std::optional<std::size_t> first_element_line;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    std::size_t nl = source.find('\n', pos);
    if (nl == std::string_view::npos) nl = source.size();
    std::string_view line = source.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    auto tokens = tokenize(line);
    if (auto* fail = std::get_if<LineFailure>(&tokens)) {
      errors.push_back({{line_no, fail->column}, fail->kind, std::move(fail->message)});
      continue;
    }
    const auto& toks = std::get<Tokens>(tokens);
    if (toks.empty()) continue;

    auto parsed = parse_statement(toks, line.size());
    if (auto* fail = std::get_if<LineFailure>(&parsed)) {
      errors.push_back({{line_no, fail->column}, fail->kind, std::move(fail->message)});
      continue;
    }
    auto& st = std::get<Statement>(parsed);
    const Provenance origin{line_no};

    if (st.keyword == "system") {
      if (system_line) {
        errors.push_back({{line_no, toks.front().column},
                          ParseErrorKind::duplicate_system,
                          "duplicate 'system' (first on line " + std::to_string(*system_line) + ")"});
        continue;
      }
      system_line = line_no;
      model.system_name = std::move(st.name);
      continue;
    }

    if (!system_line && !first_element_line) first_element_line = line_no;

    if (st.keyword == "stakeholder") {
      model.stakeholders.push_back({std::move(st.id), std::move(st.name), origin});
    } else if (st.keyword == "goal") {
      model.goals.push_back({std::move(st.id), std::move(st.name), std::move(st.refs), origin});
    } else if (st.keyword == "subgoal") {
      model.subgoals.push_back({std::move(st.id), std::move(st.name), std::move(st.refs), origin});
    } else if (st.keyword == "nfr") {
      Nfr n;
      n.id = std::move(st.id);
      n.display_name = std::move(st.name);
      n.origin = origin;
      model.nfrs.push_back(std::move(n));
      nfr_targets.push_back(std::move(st.refs));
    } else {
      checks.push_back({std::move(st), line_no});
    }
  }

  if (first_element_line) {
    errors.push_back({{*first_element_line, 1},
                      ParseErrorKind::missing_system,
                      system_line ? "element declared before 'system'" : "missing 'system' statement"});
  } else if (!system_line) {
    errors.push_back({{1, 1}, ParseErrorKind::missing_system, "missing 'system' statement"});
  }

  if (!errors.empty()) {
    std::stable_sort(errors.begin(), errors.end(), [](const ParseError& a, const ParseError& b) {
      return a.span.line < b.span.line;
    });
    return errors;
  }

  for (std::size_t i = 0; i < model.nfrs.size(); ++i) resolve_attachments(model, model.nfrs[i], nfr_targets[i]);

  for (auto& c : checks) {
    auto it = std::find_if(model.nfrs.begin(), model.nfrs.end(),
                           [&](const Nfr& n) { return n.id == c.st.id; });
    if (it == model.nfrs.end()) {
      model.orphan_checks.push_back({std::move(c.st.id), c.st.question, c.st.answer, Provenance{c.line}});
      continue;
    }
    it->checklist.answers[c.st.question - 1] = c.st.answer;
    it->checklist.notes[c.st.question - 1] = std::move(c.st.note);
  }
  return model;
}

namespace detail {

inline void write_name(std::ostream& os, std::string_view name, std::string_view what) {
  if (name.empty()) throw SerializeError(std::string(what) + " has an empty display name");
  if (name.find_first_of("\"\n") != std::string_view::npos)
    throw SerializeError(std::string(what) + " display name contains a quote or newline");
  os << '"' << name << '"';
}

inline void write_id(std::ostream& os, std::string_view id) {
  if (!is_identifier(id)) throw SerializeError("bad identifier '" + std::string(id) + "'");
  os << id;
}

inline void write_list(std::ostream& os, const std::vector<std::string>& ids) {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) os << ", ";
    write_id(os, ids[i]);
  }
}

}  // namespace detail

/// Emits canonical text: system, stakeholders, goals, sub-goals, NFRs, then
/// answered checklist slots. Throws SerializeError for models with dangling
/// references or duplicate ids, and for names the format cannot carry.
inline std::string serialize(const Model& model) {
  using detail::write_id;
  using detail::write_list;
  using detail::write_name;

  for (const auto& d : validate_structure(model))
    if (d.rule_id == RuleId::REF || d.rule_id == RuleId::DUP)
      throw SerializeError("cannot serialize '" + d.subject_id + "': " + d.message);

  std::ostringstream os;
  os << "system ";
  write_name(os, model.system_name, "system");
  os << '\n';
  for (const auto& s : model.stakeholders) {
    os << "stakeholder ";
    write_id(os, s.id);
    os << ' ';
    write_name(os, s.display_name, s.id);
    os << '\n';
  }
  for (const auto& g : model.goals) {
    if (g.owners.empty()) throw SerializeError("goal '" + g.id + "' has no owner");
    os << "goal ";
    write_id(os, g.id);
    os << ' ';
    write_name(os, g.display_name, g.id);
    os << " for ";
    write_list(os, g.owners);
    os << '\n';
  }
  for (const auto& s : model.subgoals) {
    if (s.parents.empty()) throw SerializeError("sub-goal '" + s.id + "' has no parent");
    os << "subgoal ";
    write_id(os, s.id);
    os << ' ';
    write_name(os, s.display_name, s.id);
    os << " of ";
    write_list(os, s.parents);
    os << '\n';
  }
  for (const auto& n : model.nfrs) {
    os << "nfr ";
    write_id(os, n.id);
    os << ' ';
    write_name(os, n.display_name, n.id);
    if (!n.attached_goals.empty() || !n.attached_subgoals.empty()) {
      std::vector<std::string> targets = n.attached_goals;
      targets.insert(targets.end(), n.attached_subgoals.begin(), n.attached_subgoals.end());
      os << " on ";
      write_list(os, targets);
    }
    os << '\n';
  }
  for (const auto& n : model.nfrs) {
    for (std::size_t q = 0; q < checklist_size; ++q) {
      Answer a = n.checklist.answers[q];
      if (a == Answer::unanswered) continue;
      os << "check " << n.id << ' ' << (q + 1) << ' ' << (a == Answer::yes ? "yes" : "no");
      if (const auto& note = n.checklist.notes[q]) {
        os << ' ';
        write_name(os, *note, "checklist note");
      }
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace nfr4
