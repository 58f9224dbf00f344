#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "strandcheck/calculus.hpp"

namespace sc {

// Named parameters of a rule instance. Values are paths ("f1;f" or "id(B)"),
// arrow names or square labels depending on the rule.
using Binding = std::map<std::string, std::string>;

std::string binding_to_string(const Binding& b);
Path parse_path(const BasePresentation& base, const std::string& text);

enum class Direction { Fwd, Bwd };
const char* direction_name(Direction d);

// A rule schema instance: two parallel diagrams without outer whiskers.
struct RulePair {
  Diagram lhs;
  Diagram rhs;
};

const std::vector<std::string>& rule_names();
RulePair instantiate_rule(const Signature& sig, const std::string& name, const Binding& b);

// User macros: parameterless named diagrams read from a [macros] section.
class MacroTable {
 public:
  void add(const std::string& name, const Diagram& d);
  const Diagram* find(const std::string& name) const;
  const std::map<std::string, Diagram>& all() const { return defs_; }

 private:
  std::map<std::string, Diagram> defs_;
};

bool is_builtin_macro(const std::string& name);
// Number of 2-cell arguments a builtin macro takes (the rest are scalars).
std::size_t macro_cell_arity(const std::string& name);
// Fully expanded diagram (every nested macro box is unfolded).
Diagram expand_macro(const Signature& sig, const GenTwoCell& g);
// Replaces every macro layer by its expansion.
Diagram expand_all(const Signature& sig, const Diagram& d);

// Appends g at strand k, unfolding macros on the fly.
void push_expanded(const Signature& sig, Diagram& d, const GenTwoCell& g, std::size_t k);

struct Position {
  std::size_t first = 0;  // first layer of the matched block
  std::size_t count = 0;  // number of layers in the block (0 for insertions)
  std::size_t strand = 0;
};
std::string position_to_string(const Position& p);

enum class StepKind { Rule, MacroFold, MacroUnfold, Coherence, Axiom, Prior, Canonical };

struct ProofStep {
  StepKind kind = StepKind::Canonical;
  std::string name;  // rule name, axiom name or prior script name
  Binding binding;   // rules
  GenTwoCell macro;  // fold/unfold
  Direction dir = Direction::Fwd;
  Position pos;
  Diagram result;
};

std::string justification_to_string(const ProofStep& s);

struct ProofScript {
  std::string name;
  Signature sig;
  Diagram lhs;
  Diagram rhs;
  std::vector<std::string> requires_;
  std::vector<ProofStep> steps;
};

enum class Verdict { Verified, Failed, Skipped };
const char* verdict_name(Verdict v);

struct CheckReport {
  std::string script;
  Verdict verdict = Verdict::Verified;
  // -1 for the claim itself, otherwise the 0-based index of the failing step.
  long failed_step = -1;
  std::optional<ErrorCode> error;
  std::string reason;
  std::size_t steps_checked = 0;
  std::map<std::string, std::size_t> rules_used;
  double seconds = 0;
};

struct AxiomEquation {
  std::string name;
  Diagram lhs;
  Diagram rhs;
};
// Defined in the descent module; the checker looks axioms up through it.
std::vector<AxiomEquation> axiom_equations(const Signature& sig);

class Session {
 public:
  std::set<std::string> disabled_axioms;
  const ProofScript* find_verified(const std::string& name) const;
  bool is_verified(const std::string& name) const { return find_verified(name) != nullptr; }
  void add_verified(const ProofScript& s);
  const std::map<std::string, ProofScript>& verified() const { return verified_; }

 private:
  std::map<std::string, ProofScript> verified_;
};

// Rewrites d at pos by replacing the pattern block with its counterpart.
// Throws PatternNotFound when the block does not match.
Diagram rewrite_at(const Signature& sig, const Diagram& d, const Diagram& pattern,
                   const Diagram& replacement, const Position& pos);
// First position where pattern occurs as a contiguous block of d.
std::optional<Position> find_pattern(const Signature& sig, const Diagram& d,
                                     const Diagram& pattern);

// Pattern and replacement for a non-canonical, non-coherence step.
RulePair step_pattern(const Signature& sig, const ProofStep& step, const Session& session);

// Computes the diagram produced by the step from prev (stated result unused
// except for coherence, whose replacement block is read off step.result).
Diagram apply_step(const Signature& sig, const Diagram& prev, const ProofStep& step,
                   const Session& session);

CheckReport check_script(const ProofScript& s, Session& session);
// Checks scripts in dependency order; unverified dependencies mark dependents Skipped.
std::vector<CheckReport> check_all(const std::vector<ProofScript>& scripts, Session& session);

// Coherence for the pure-chi fragment.
bool is_pure_chi(const Diagram& d);
Diagram normalize_fib(const Signature& sig, const Diagram& d);
bool decide_fib_equal(const Signature& sig, const Diagram& d1, const Diagram& d2);

// All paths parallel to p with equal value and at most max_len arrows,
// reachable within the presentation's search bound.
std::vector<Path> equal_paths(const BasePresentation& base, const Path& p, std::size_t max_len);

struct RandomFibOptions {
  std::size_t max_layers = 5;
  std::size_t max_path_len = 4;
};
Diagram random_fib_diagram(const Signature& sig, std::mt19937_64& rng,
                           const RandomFibOptions& opt);
// Random pure-chi diagram with the given source.
Diagram random_fib_from(const Signature& sig, const OneCellPath& source, std::mt19937_64& rng,
                        const RandomFibOptions& opt);

// Distinct one-step reducts under oriented R1, R2, R3.1 and R3.2, with redexes
// taken in every layer ordering of the exchange class; results are canonical.
std::vector<Diagram> oriented_successors(const Signature& sig, const Diagram& d);

struct ProbeReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t states_explored = 0;
  std::vector<std::string> messages;
};
using ProbeHook = std::function<std::vector<Diagram>(const Diagram&)>;
constexpr std::size_t kProbeStateCap = 16000000;

// Explores every maximal oriented rewrite sequence from d (states taken modulo
// exchange, at most 8 layers) and reports a violation unless there is exactly one terminal
// diagram, equal to normalize_fib(d) and to the boundary chi. hook, when set,
// may inject extra successors (used by negative controls).
ProbeReport probe_diagram(const Signature& sig, const Diagram& d, const ProbeHook& hook = nullptr,
                          const std::string& tag = "diagram",
                          std::size_t state_cap = kProbeStateCap);
ProbeReport confluence_probe(const Signature& sig, const RandomFibOptions& size,
                             std::size_t samples, std::uint64_t seed,
                             const ProbeHook& hook = nullptr);

}  // namespace sc
