#include "strandcheck/builder.hpp"

namespace sc {

std::string describe(const Diagram& d) {
  std::string s;
  for (const auto& l : d.layers) {
    if (!s.empty()) s += "; ";
    s += l.gen.str() + "@" + std::to_string(l.left.size());
  }
  return s.empty() ? "(identity)" : s;
}

ScriptBuilder::ScriptBuilder(Signature sig, std::string name, Diagram lhs, Diagram rhs) {
  script_.name = std::move(name);
  script_.sig = std::move(sig);
  script_.lhs = std::move(lhs);
  script_.rhs = std::move(rhs);
  cur_ = script_.lhs;
}

ScriptBuilder& ScriptBuilder::require(const std::string& name) {
  script_.requires_.push_back(name);
  return *this;
}

ScriptBuilder& ScriptBuilder::push(ProofStep st, std::optional<Position> pos) {
  const Signature& sig = script_.sig;
  try {
    if (st.kind != StepKind::Canonical && st.kind != StepKind::Coherence) {
      RulePair rp = step_pattern(sig, st, session_);
      if (!pos) {
        if (rp.lhs.layers.empty())
          fail(ErrorCode::PatternNotFound, "insertions need an explicit position");
        pos = find_pattern(sig, cur_, rp.lhs);
        if (!pos) fail(ErrorCode::PatternNotFound, "pattern " + describe(rp.lhs) + " not found");
      }
      st.pos = *pos;
      st.result = apply_step(sig, cur_, st, session_);
    }
    validate_diagram(sig, st.result);
  } catch (const Error& e) {
    fail(e.code(), script_.name + " step " + std::to_string(script_.steps.size() + 1) + " (" +
                       justification_to_string(st) + ") on [" + describe(cur_) + "]: " + e.what());
  }
  cur_ = st.result;
  script_.steps.push_back(std::move(st));
  return *this;
}

ScriptBuilder& ScriptBuilder::rule(const std::string& name, const Binding& b, Direction dir,
                                   std::optional<Position> pos) {
  ProofStep st;
  st.kind = StepKind::Rule;
  st.name = name;
  st.binding = b;
  st.dir = dir;
  return push(std::move(st), pos);
}

ScriptBuilder& ScriptBuilder::axiom(const std::string& name, Direction dir,
                                    std::optional<Position> pos) {
  ProofStep st;
  st.kind = StepKind::Axiom;
  st.name = name;
  st.dir = dir;
  return push(std::move(st), pos);
}

ScriptBuilder& ScriptBuilder::prior(const ProofScript& p, Direction dir,
                                    std::optional<Position> pos) {
  session_.add_verified(p);
  ProofStep st;
  st.kind = StepKind::Prior;
  st.name = p.name;
  st.dir = dir;
  return push(std::move(st), pos);
}

ScriptBuilder& ScriptBuilder::unfold(const GenTwoCell& macro, std::optional<Position> pos) {
  ProofStep st;
  st.kind = StepKind::MacroUnfold;
  st.macro = macro;
  return push(std::move(st), pos);
}

ScriptBuilder& ScriptBuilder::fold(const GenTwoCell& macro, std::optional<Position> pos) {
  ProofStep st;
  st.kind = StepKind::MacroFold;
  st.macro = macro;
  return push(std::move(st), pos);
}

ScriptBuilder& ScriptBuilder::arrange(const LayerSpec& layers) {
  ProofStep st;
  st.kind = StepKind::Canonical;
  try {
    st.result = from_offsets(script_.sig, cur_.source, layers);
  } catch (const Error& e) {
    fail(e.code(), script_.name + " arrangement [" + describe(cur_) + "]: " + e.what());
  }
  if (!isotopic(script_.sig, cur_, st.result))
    fail(ErrorCode::ResultMismatch, script_.name + ": [" + describe(st.result) +
                                        "] is not isotopic to [" + describe(cur_) + "]");
  return push(std::move(st), std::nullopt);
}

ScriptBuilder& ScriptBuilder::coherence(std::size_t first, std::size_t count,
                                        const LayerSpec& replacement) {
  ProofStep st;
  st.kind = StepKind::Coherence;
  st.pos = {first, count, 0};
  LayerSpec all;
  for (std::size_t i = 0; i < first; ++i)
    all.push_back({cur_.layers[i].gen, cur_.layers[i].left.size()});
  all.insert(all.end(), replacement.begin(), replacement.end());
  for (std::size_t i = first + count; i < cur_.layers.size(); ++i)
    all.push_back({cur_.layers[i].gen, cur_.layers[i].left.size()});
  st.result = from_offsets(script_.sig, cur_.source, all);
  apply_step(script_.sig, cur_, st, session_);
  Position pos = st.pos;
  return push(std::move(st), pos);
}

ProofScript ScriptBuilder::build() const {
  if (!isotopic(script_.sig, cur_, script_.rhs))
    fail(ErrorCode::ResultMismatch, script_.name + ": final [" + describe(cur_) +
                                        "] is not isotopic to [" + describe(script_.rhs) + "]");
  return script_;
}

}  // namespace sc
