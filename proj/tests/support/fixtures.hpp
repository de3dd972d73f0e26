#pragma once

#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <variant>

#include "nfr4/dsl.hpp"

namespace nfr4::test {

inline std::string models_dir() { return NFR4_MODELS_DIR; }

inline std::string fixture_path(const std::string& name) { return models_dir() + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Model load_model(const std::string& name) {
  auto result = parse(read_file(fixture_path(name)), name);
  if (auto* errors = std::get_if<std::vector<ParseError>>(&result))
    throw std::runtime_error(name + ": " + errors->front().message);
  return std::get<Model>(std::move(result));
}

inline Model library() { return load_model("library.nfr4"); }
inline Model atm() { return load_model("atm.nfr4"); }

}  // namespace nfr4::test
