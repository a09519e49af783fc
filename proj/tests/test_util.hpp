#pragma once

#include <string>

#include "threadlint/ast.hpp"

namespace testutil {

inline std::string corpus(const std::string& rel = "") {
  return rel.empty() ? std::string(TEST_CORPUS_DIR) : std::string(TEST_CORPUS_DIR) + "/" + rel;
}

inline threadlint::Ast parse(const std::string& text, const std::string& path = "T.java") {
  return threadlint::parse_compilation_unit(threadlint::SourceFile::from_string(path, text));
}

inline threadlint::Ast parse_file(const std::string& rel) {
  return threadlint::parse_compilation_unit(threadlint::SourceFile::load(corpus(rel)));
}

}  // namespace testutil

#include <memory>

#include "threadlint/class_model.hpp"

namespace testutil {

/// Keeps the Ast and options alive alongside the model built from them.
struct Model {
  threadlint::Ast ast;
  threadlint::AnalysisOptions options;
  threadlint::ClassModel cm;

  const threadlint::MethodDecl& method(const std::string& name) const {
    for (const auto& m : cm.decl->methods)
      if (m.name == name) return m;
    throw std::out_of_range("no method " + name);
  }
  const threadlint::FieldDecl& field(const std::string& name) const {
    const auto* f = cm.decl->find_field(name);
    if (!f) throw std::out_of_range("no field " + name);
    return *f;
  }
};

inline std::unique_ptr<Model> model(threadlint::Ast ast, threadlint::AnalysisOptions options = {}) {
  auto m = std::make_unique<Model>();
  m->ast = std::move(ast);
  m->options = std::move(options);
  m->cm = threadlint::build_class_model(m->ast, m->ast.classes.at(0), m->options);
  return m;
}

inline std::unique_ptr<Model> model_of(const std::string& text, threadlint::AnalysisOptions options = {}) {
  return model(parse(text), std::move(options));
}

inline std::unique_ptr<Model> model_file(const std::string& rel, threadlint::AnalysisOptions options = {}) {
  return model(parse_file(rel), std::move(options));
}

}  // namespace testutil
