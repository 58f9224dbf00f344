#pragma once

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "strandcheck/calculus.hpp"

namespace sc {

// Families over finite sets: the fiber over an object is the category of
// carrier-indexed families, reindexing is precomposition and direct image is
// the fiberwise tagged coproduct.

using Elem = std::string;
using ElemSet = std::vector<Elem>;  // sorted, no duplicates

struct FinInstance {
  std::map<std::string, ElemSet> carrier;
  std::map<std::string, std::map<Elem, Elem>> action;

  const ElemSet& of(const std::string& obj) const;
  const Elem& apply(const std::string& arrow, const Elem& x) const;
  Elem apply(const Path& p, const Elem& x) const;
};

// Kernel-pair instance for the builtin descent base from f: B -> A.
// Q = {(b,b') | f b = f b'}, R = {(q1,q2) | f2 q2 = f1 q1}, pi(q1,q2) = (f1 q2, f2 q1).
FinInstance make_instance(const ElemSet& A, const ElemSet& B, const std::map<Elem, Elem>& f);
FinInstance random_instance(std::size_t max_size, std::mt19937_64& rng);
// Throws RelationViolated unless every relation holds and every square is a pullback.
void check_instance(const BasePresentation& base, const FinInstance& inst);

struct Family {
  FiberSym over;
  std::map<Elem, ElemSet> fibers;  // terminal: the single key "*"

  bool operator==(const Family& o) const { return over == o.over && fibers == o.fibers; }
  bool operator!=(const Family& o) const { return !(*this == o); }
  std::size_t total() const;
};

struct FamilyMap {
  Family src, dst;
  std::map<Elem, std::map<Elem, Elem>> components;

  bool operator==(const FamilyMap& o) const {
    return src == o.src && dst == o.dst && components == o.components;
  }
  bool operator!=(const FamilyMap& o) const { return !(*this == o); }
  bool is_identity() const;
};

Elem tag(const Elem& index, const Elem& x);
std::pair<Elem, Elem> untag(const Elem& e);

Family terminal_family();
FamilyMap identity_map(const Family& x);
FamilyMap compose(const FamilyMap& first, const FamilyMap& second);

// Descent generator component: (base element, source element) -> target element.
using GeneratorValue = std::function<Elem(const Elem& over, const Elem& x)>;

struct Env {
  std::map<std::string, Family> objects;
  std::map<std::string, GeneratorValue> generators;
};

Family interpret_token(const Signature& sig, const OneCellToken& t, const FinInstance& inst,
                       const Family& x, const Env& env);
Family interpret_path(const Signature& sig, const OneCellPath& p, const FinInstance& inst,
                      const Family& input, const Env& env);
FamilyMap interpret_diagram(const Signature& sig, const Diagram& d, const FinInstance& inst,
                            const Env& env, const Family& input = terminal_family());

// A family X over the source of f presented as relabelled copies of some Y over
// the target, X_b = sigma_b(Y_{f b}); it carries canonical alpha, phi and beta.
struct DescentSample {
  Family x;
  std::map<Elem, std::map<Elem, Elem>> sigma_inv;  // b -> (x in X_b -> y)
  std::map<Elem, std::map<Elem, Elem>> sigma;      // b -> (y -> x in X_b)
};
DescentSample random_descent_sample(const Signature& sig, const FinInstance& inst,
                                    std::size_t max_fiber, std::mt19937_64& rng);
Env descent_env(const Signature& sig, const FinInstance& inst, const DescentSample& s);
Family random_family(const FinInstance& inst, const FiberSym& over, std::size_t max_fiber,
                     std::mt19937_64& rng);

struct OracleReport {
  std::size_t samples = 0;
  std::size_t mismatches = 0;
  std::string message;  // first mismatch
  bool equal() const { return mismatches == 0; }
};

OracleReport oracle_equal(const Signature& sig, const Diagram& d1, const Diagram& d2,
                          std::size_t inst_count, std::size_t max_size, std::uint64_t seed,
                          std::size_t max_fiber = 3);

std::string instance_to_json(const FinInstance& inst);

}  // namespace sc
