#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "strandcheck/base.hpp"

namespace sc {

struct FiberSym {
  bool terminal = false;
  std::string obj;

  static FiberSym term() { return {true, ""}; }
  static FiberSym of(const std::string& o) { return {false, o}; }
  bool operator==(const FiberSym& o) const {
    return terminal == o.terminal && (terminal || obj == o.obj);
  }
  bool operator!=(const FiberSym& o) const { return !(*this == o); }
  bool operator<(const FiberSym& o) const {
    return std::make_pair(terminal, obj) < std::make_pair(o.terminal, o.obj);
  }
  std::string str() const { return terminal ? "1" : obj; }
};

enum class TokKind { Star, Shriek, Obj };

struct OneCellToken {
  TokKind kind = TokKind::Star;
  std::string name;   // arrow name, or object generator name
  std::string fiber;  // ObjGen only: the base object it lives over

  static OneCellToken star(const std::string& a) { return {TokKind::Star, a, ""}; }
  static OneCellToken shriek(const std::string& a) { return {TokKind::Shriek, a, ""}; }
  static OneCellToken obj(const std::string& x, const std::string& b) {
    return {TokKind::Obj, x, b};
  }
  bool operator==(const OneCellToken& o) const {
    return kind == o.kind && name == o.name && fiber == o.fiber;
  }
  bool operator!=(const OneCellToken& o) const { return !(*this == o); }
  bool operator<(const OneCellToken& o) const;
  std::string str() const;
};

struct OneCellPath {
  FiberSym dom;
  std::vector<OneCellToken> tokens;
  FiberSym cod;

  std::size_t size() const { return tokens.size(); }
  bool operator==(const OneCellPath& o) const {
    return dom == o.dom && cod == o.cod && tokens == o.tokens;
  }
  bool operator!=(const OneCellPath& o) const { return !(*this == o); }
  std::string str() const;
};

enum class Extension { None, TA, DD, AC };
const char* extension_name(Extension e);
Extension extension_from_name(const std::string& s);

enum class GenKind { Chi, Eta, Eps, BCbar, Descent, Macro };

// A generating 2-cell, or a named macro box standing for its expansion.
struct GenTwoCell {
  GenKind kind = GenKind::Chi;
  PolygonType pt;                   // Chi
  std::string name;                 // arrow (Eta/Eps), square (BCbar),
                                    // alpha|phi|beta (Descent), macro name
  std::vector<std::string> params;  // Macro: scalar parameters
  std::vector<GenTwoCell> args;     // Macro: 2-cell arguments

  static GenTwoCell chi(const PolygonType& pt) { return {GenKind::Chi, pt, "", {}, {}}; }
  static GenTwoCell chi(const Path& top, const Path& bottom) { return chi(PolygonType{top, bottom}); }
  static GenTwoCell eta(const std::string& h) { return {GenKind::Eta, {}, h, {}, {}}; }
  static GenTwoCell eps(const std::string& h) { return {GenKind::Eps, {}, h, {}, {}}; }
  static GenTwoCell bcbar(const std::string& p) { return {GenKind::BCbar, {}, p, {}, {}}; }
  static GenTwoCell descent(const std::string& n) { return {GenKind::Descent, {}, n, {}, {}}; }
  static GenTwoCell macro(const std::string& n, std::vector<std::string> params = {},
                          std::vector<GenTwoCell> args = {}) {
    return {GenKind::Macro, {}, n, std::move(params), std::move(args)};
  }

  bool operator==(const GenTwoCell& o) const;
  bool operator!=(const GenTwoCell& o) const { return !(*this == o); }
  std::string str() const;
};

struct Layer {
  OneCellPath left;
  GenTwoCell gen;
  OneCellPath right;
  bool operator==(const Layer& o) const {
    return left == o.left && gen == o.gen && right == o.right;
  }
  bool operator!=(const Layer& o) const { return !(*this == o); }
};

struct Diagram {
  OneCellPath source;
  OneCellPath target;
  std::vector<Layer> layers;

  bool operator==(const Diagram& o) const {
    return source == o.source && target == o.target && layers == o.layers;
  }
  bool operator!=(const Diagram& o) const { return !(*this == o); }
  std::size_t size() const { return layers.size(); }
};

class MacroTable;

struct Signature {
  std::shared_ptr<const BasePresentation> base;
  Extension extension = Extension::None;
  std::string f = "f";             // distinguished arrow f: B -> A
  std::string x_name = "X";        // object generator X
  std::string kernel_square = "P1";  // square (a=f1, c=f2, d=f, b=f)
  std::shared_ptr<const MacroTable> user_macros;

  const BasePresentation& b() const { return *base; }
  std::string f1() const;
  std::string f2() const;
  std::string x_fiber() const;
  OneCellToken x_token() const { return OneCellToken::obj(x_name, x_fiber()); }
  Signature with_extension(Extension e) const {
    Signature s = *this;
    s.extension = e;
    return s;
  }
};

// Token typing.
FiberSym token_dom(const Signature& sig, const OneCellToken& t);
FiberSym token_cod(const Signature& sig, const OneCellToken& t);

OneCellPath empty_cell_path(const FiberSym& at);
// Checks composability; dom is needed only when tokens is empty.
OneCellPath make_cell_path(const Signature& sig, const FiberSym& dom,
                           std::vector<OneCellToken> tokens);
OneCellPath concat(const OneCellPath& p, const OneCellPath& q);
OneCellPath slice(const Signature& sig, const OneCellPath& p, std::size_t from,
                  std::size_t to);
// Fiber sitting between tokens i-1 and i.
FiberSym fiber_at(const Signature& sig, const OneCellPath& p, std::size_t i);

OneCellPath star_lift(const BasePresentation& base, const Path& p);
OneCellPath shriek_lift(const BasePresentation& base, const Path& p);
// Inverse of star_lift for all-Star token lists.
Path star_unlift(const BasePresentation& base, const OneCellPath& p);
bool all_star(const OneCellPath& p);

std::pair<OneCellPath, OneCellPath> generator_boundary(const Signature& sig,
                                                       const GenTwoCell& g);

// Diagram construction.
Diagram identity_diagram(const OneCellPath& p);
Layer make_layer(const Signature& sig, const OneCellPath& left, const GenTwoCell& g,
                 const OneCellPath& right);
Diagram single_layer(const Signature& sig, const OneCellPath& left, const GenTwoCell& g,
                     const OneCellPath& right);
Diagram generator_diagram(const Signature& sig, const GenTwoCell& g);

// Appends a layer at strand offset k of the current target.
void push_layer(const Signature& sig, Diagram& d, const GenTwoCell& g, std::size_t k);
Diagram from_offsets(const Signature& sig, const OneCellPath& source,
                     const std::vector<std::pair<GenTwoCell, std::size_t>>& layers);

OneCellPath layer_source(const Signature& sig, const Layer& l);
OneCellPath layer_target(const Signature& sig, const Layer& l);
// boundaries[i] is the 1-cell above layer i; boundaries.back() is the target.
std::vector<OneCellPath> boundaries(const Signature& sig, const Diagram& d);
void validate_diagram(const Signature& sig, const Diagram& d);

Diagram vcompose(const Signature& sig, const Diagram& d1, const Diagram& d2);
Diagram hcompose(const Signature& sig, const Diagram& d1, const Diagram& d2);
enum class Side { Left, Right };
Diagram whisker(const Signature& sig, Side side, const OneCellPath& p, const Diagram& d);

// Interval form of a layer used by the exchange machinery.
struct Slot {
  std::size_t k = 0;  // strand offset
  std::size_t s = 0;  // source width
  std::size_t t = 0;  // target width
  GenTwoCell gen;
};
std::vector<Slot> to_slots(const Signature& sig, const Diagram& d);
Diagram from_slots(const Signature& sig, const OneCellPath& source,
                   const std::vector<Slot>& slots);

// Swapping adjacent slots (upper, lower); lower is given in upper's output
// coordinates. Returns every valid exchanged pair (new upper, new lower).
std::vector<std::pair<Slot, Slot>> exchange_pair(const Slot& upper, const Slot& lower);

Diagram exchange_canonical(const Signature& sig, const Diagram& d);
std::vector<Slot> canonical_slots(const std::vector<Slot>& slots);
bool isotopic(const Signature& sig, const Diagram& d1, const Diagram& d2);

// Realizes a target ordering of layers (given as a permutation of indices)
// through valid exchanges; returns nullopt if some move is not an exchange.
std::optional<Diagram> reorder_layers(const Signature& sig, const Diagram& d,
                                      const std::vector<std::size_t>& order);

std::string slot_key(const Slot& s);

}  // namespace sc
