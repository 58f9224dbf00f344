#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "strandcheck/rewrite.hpp"

namespace sc {

using LayerSpec = std::vector<std::pair<GenTwoCell, std::size_t>>;

// Compact "gen@k; gen@k" rendering of a diagram's layers.
std::string describe(const Diagram& d);

// Authors a proof script step by step; every step result is computed by the
// rewriting machinery, so a built script is correct by construction unless
// the requested move is illegal, in which case the builder throws.
class ScriptBuilder {
 public:
  ScriptBuilder(Signature sig, std::string name, Diagram lhs, Diagram rhs);

  ScriptBuilder& require(const std::string& name);
  const Diagram& current() const { return cur_; }

  ScriptBuilder& rule(const std::string& name, const Binding& b, Direction dir = Direction::Fwd,
                      std::optional<Position> pos = std::nullopt);
  ScriptBuilder& axiom(const std::string& name, Direction dir = Direction::Fwd,
                       std::optional<Position> pos = std::nullopt);
  ScriptBuilder& prior(const ProofScript& p, Direction dir = Direction::Fwd,
                       std::optional<Position> pos = std::nullopt);
  ScriptBuilder& unfold(const GenTwoCell& macro, std::optional<Position> pos = std::nullopt);
  ScriptBuilder& fold(const GenTwoCell& macro, std::optional<Position> pos = std::nullopt);
  // Isotopy move to the given layer arrangement of the current source.
  ScriptBuilder& arrange(const LayerSpec& layers);
  // Replaces layers first..first+count-1 by a pure-chi block.
  ScriptBuilder& coherence(std::size_t first, std::size_t count, const LayerSpec& replacement);

  ProofScript build() const;

 private:
  ScriptBuilder& push(ProofStep st, std::optional<Position> pos);

  ProofScript script_;
  Session session_;
  Diagram cur_;
};

}  // namespace sc
