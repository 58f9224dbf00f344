#pragma once

#include <memory>
#include <string>
#include <vector>

#include "strandcheck/rewrite.hpp"

namespace sc {

// Proof-script files: [base], [signature], [macros], [diagram ...], [script ...].

struct NamedDiagram {
  std::string name;
  Extension extension = Extension::None;
  Diagram diagram;
};

// Diagram names a script's claim and steps refer to.
struct ScriptRefs {
  std::string lhs, rhs;
  std::vector<std::string> steps;
};

struct ScriptFile {
  std::shared_ptr<BasePresentation> base;
  Signature defaults;  // extension, f, object generator and kernel square
  std::shared_ptr<MacroTable> macros;
  std::vector<std::pair<std::string, std::string>> macro_defs;  // macro name, diagram name
  std::vector<NamedDiagram> diagrams;
  std::vector<ProofScript> scripts;
  std::vector<ScriptRefs> refs;  // parallel to scripts

  const NamedDiagram* find_diagram(const std::string& name) const;
  Signature signature(Extension e) const;
};

ScriptFile parse_script_file(const std::string& text, const std::string& origin = "<input>");
ScriptFile read_script_file(const std::string& path);
std::string print_script_file(const ScriptFile& f);

// File holding the given scripts, which must share one base presentation.
// Diagrams are named <script>.lhs, <script>.rhs and <script>.<step>.
ScriptFile script_file_for(const std::vector<ProofScript>& scripts);

std::string print_cell_path(const OneCellPath& p);
OneCellPath parse_cell_path(const Signature& sig, const std::string& text);
GenTwoCell parse_generator(const Signature& sig, const std::string& text);
std::string print_diagram_block(const std::string& name, Extension e, const Diagram& d);

}  // namespace sc
