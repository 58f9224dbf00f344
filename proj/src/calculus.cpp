#include "strandcheck/calculus.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <mutex>
#include <unordered_map>
#include <unordered_set>
#include <cstdint>

#include "strandcheck/rewrite.hpp"

namespace sc {

const char* extension_name(Extension e) {
  switch (e) {
    case Extension::None: return "none";
    case Extension::TA: return "TA";
    case Extension::DD: return "DD";
    case Extension::AC: return "AC";
  }
  return "none";
}

Extension extension_from_name(const std::string& s) {
  if (s == "none") return Extension::None;
  if (s == "TA") return Extension::TA;
  if (s == "DD") return Extension::DD;
  if (s == "AC") return Extension::AC;
  fail(ErrorCode::ParseError, "unknown extension " + s);
}

bool OneCellToken::operator<(const OneCellToken& o) const {
  return std::tie(kind, name, fiber) < std::tie(o.kind, o.name, o.fiber);
}

std::string OneCellToken::str() const {
  switch (kind) {
    case TokKind::Star: return name + "*";
    case TokKind::Shriek: return name + "!";
    case TokKind::Obj: return name + "@" + fiber;
  }
  return name;
}

std::string OneCellPath::str() const {
  if (tokens.empty()) return "id(" + dom.str() + ")";
  std::string s;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) s += " ";
    s += tokens[i].str();
  }
  return s;
}

bool GenTwoCell::operator==(const GenTwoCell& o) const {
  if (kind != o.kind) return false;
  if (kind == GenKind::Chi) return pt == o.pt;
  return name == o.name && params == o.params && args == o.args;
}

namespace {

std::string chi_path(const Path& p) {
  if (p.arrows.empty()) return "id(" + p.src + ")";
  std::string s;
  for (std::size_t i = 0; i < p.arrows.size(); ++i) {
    if (i) s += ",";
    s += p.arrows[i];
  }
  return s;
}

std::string gen_inner(const GenTwoCell& g) {
  switch (g.kind) {
    case GenKind::Chi: return "chi(" + chi_path(g.pt.top) + ";" + chi_path(g.pt.bottom) + ")";
    case GenKind::Eta: return "eta(" + g.name + ")";
    case GenKind::Eps: return "eps(" + g.name + ")";
    case GenKind::BCbar: return "bcbar(" + g.name + ")";
    case GenKind::Descent: return g.name;
    case GenKind::Macro: {
      std::string s = g.name;
      if (!g.params.empty() || !g.args.empty()) {
        s += "(";
        bool first = true;
        for (const auto& p : g.params) {
          if (!first) s += ",";
          s += p;
          first = false;
        }
        for (const auto& a : g.args) {
          if (!first) s += ",";
          s += gen_inner(a);
          first = false;
        }
        s += ")";
      }
      return s;
    }
  }
  return "";
}

}  // namespace

std::string GenTwoCell::str() const {
  if (kind == GenKind::Macro) return "{" + gen_inner(*this) + "}";
  return gen_inner(*this);
}

std::string Signature::f1() const {
  const PullbackSquare* sq = base->find_square(kernel_square);
  if (!sq) fail(ErrorCode::InvalidGenerator, "kernel square " + kernel_square + " is not marked");
  return sq->a;
}

std::string Signature::f2() const {
  const PullbackSquare* sq = base->find_square(kernel_square);
  if (!sq) fail(ErrorCode::InvalidGenerator, "kernel square " + kernel_square + " is not marked");
  return sq->c;
}

std::string Signature::x_fiber() const { return base->arrow(f).src; }

FiberSym token_dom(const Signature& sig, const OneCellToken& t) {
  switch (t.kind) {
    case TokKind::Star: return FiberSym::of(sig.b().arrow(t.name).dst);
    case TokKind::Shriek: return FiberSym::of(sig.b().arrow(t.name).src);
    case TokKind::Obj: return FiberSym::term();
  }
  return FiberSym::term();
}

FiberSym token_cod(const Signature& sig, const OneCellToken& t) {
  switch (t.kind) {
    case TokKind::Star: return FiberSym::of(sig.b().arrow(t.name).src);
    case TokKind::Shriek: return FiberSym::of(sig.b().arrow(t.name).dst);
    case TokKind::Obj:
      if (!sig.b().has_object(t.fiber)) fail(ErrorCode::UnknownName, "unknown object " + t.fiber);
      return FiberSym::of(t.fiber);
  }
  return FiberSym::term();
}

OneCellPath empty_cell_path(const FiberSym& at) { return {at, {}, at}; }

OneCellPath make_cell_path(const Signature& sig, const FiberSym& dom,
                           std::vector<OneCellToken> tokens) {
  OneCellPath p;
  p.dom = tokens.empty() ? dom : token_dom(sig, tokens.front());
  if (!tokens.empty() && p.dom != dom)
    fail(ErrorCode::TypeMismatch, "1-cell path does not start at " + dom.str());
  FiberSym cur = p.dom;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t.kind == TokKind::Obj && i != 0)
      fail(ErrorCode::TypeMismatch, "object generator " + t.str() + " must be leftmost");
    if (token_dom(sig, t) != cur)
      fail(ErrorCode::TypeMismatch, "token " + t.str() + " does not compose after " + cur.str());
    cur = token_cod(sig, t);
  }
  p.cod = cur;
  p.tokens = std::move(tokens);
  return p;
}

OneCellPath concat(const OneCellPath& p, const OneCellPath& q) {
  if (p.cod != q.dom)
    fail(ErrorCode::BoundaryMismatch, "cannot concatenate " + p.str() + " and " + q.str());
  OneCellPath r{p.dom, p.tokens, q.cod};
  r.tokens.insert(r.tokens.end(), q.tokens.begin(), q.tokens.end());
  return r;
}

FiberSym fiber_at(const Signature& sig, const OneCellPath& p, std::size_t i) {
  if (i == 0) return p.dom;
  return token_cod(sig, p.tokens.at(i - 1));
}

OneCellPath slice(const Signature& sig, const OneCellPath& p, std::size_t from,
                  std::size_t to) {
  if (from > to || to > p.tokens.size())
    fail(ErrorCode::BoundaryMismatch, "slice out of range in " + p.str());
  OneCellPath r;
  r.dom = fiber_at(sig, p, from);
  r.cod = fiber_at(sig, p, to);
  r.tokens.assign(p.tokens.begin() + from, p.tokens.begin() + to);
  return r;
}

OneCellPath star_lift(const BasePresentation& base, const Path& p) {
  base.check_path(p);
  OneCellPath r;
  r.dom = FiberSym::of(p.dst);
  r.cod = FiberSym::of(p.src);
  for (auto it = p.arrows.rbegin(); it != p.arrows.rend(); ++it)
    r.tokens.push_back(OneCellToken::star(*it));
  return r;
}

OneCellPath shriek_lift(const BasePresentation& base, const Path& p) {
  base.check_path(p);
  OneCellPath r;
  r.dom = FiberSym::of(p.src);
  r.cod = FiberSym::of(p.dst);
  for (const auto& a : p.arrows) r.tokens.push_back(OneCellToken::shriek(a));
  return r;
}

bool all_star(const OneCellPath& p) {
  return std::all_of(p.tokens.begin(), p.tokens.end(),
                     [](const OneCellToken& t) { return t.kind == TokKind::Star; });
}

Path star_unlift(const BasePresentation& base, const OneCellPath& p) {
  if (!all_star(p) || p.dom.terminal)
    fail(ErrorCode::NotFibFragment, "not a pullback string: " + p.str());
  std::vector<std::string> arrows;
  for (auto it = p.tokens.rbegin(); it != p.tokens.rend(); ++it) arrows.push_back(it->name);
  return base.path(arrows, p.cod.obj);
}

std::pair<OneCellPath, OneCellPath> generator_boundary(const Signature& sig,
                                                       const GenTwoCell& g) {
  const BasePresentation& base = sig.b();
  switch (g.kind) {
    case GenKind::Chi: {
      PolygonCheck c = validate_polygon_type(base, g.pt);
      if (!c.ok) fail(ErrorCode::InvalidGenerator, g.str() + ": " + c.message);
      return {star_lift(base, g.pt.top), star_lift(base, g.pt.bottom)};
    }
    case GenKind::Eta: {
      const ArrowGen& h = base.arrow(g.name);
      FiberSym c = FiberSym::of(h.src);
      return {empty_cell_path(c),
              make_cell_path(sig, c, {OneCellToken::shriek(h.name), OneCellToken::star(h.name)})};
    }
    case GenKind::Eps: {
      const ArrowGen& h = base.arrow(g.name);
      FiberSym d = FiberSym::of(h.dst);
      return {make_cell_path(sig, d, {OneCellToken::star(h.name), OneCellToken::shriek(h.name)}),
              empty_cell_path(d)};
    }
    case GenKind::BCbar: {
      const PullbackSquare* sq = base.find_square(g.name);
      if (!sq) fail(ErrorCode::InvalidGenerator, "square " + g.name + " is not marked");
      FiberSym bfib = FiberSym::of(base.arrow(sq->d).src);
      return {make_cell_path(sig, bfib, {OneCellToken::shriek(sq->d), OneCellToken::star(sq->b)}),
              make_cell_path(sig, bfib, {OneCellToken::star(sq->a), OneCellToken::shriek(sq->c)})};
    }
    case GenKind::Descent: {
      Extension want = g.name == "alpha" ? Extension::TA
                       : g.name == "phi" ? Extension::DD
                       : g.name == "beta" ? Extension::AC
                                          : Extension::None;
      if (want == Extension::None)
        fail(ErrorCode::InvalidGenerator, "unknown descent generator " + g.name);
      if (sig.extension != want)
        fail(ErrorCode::InvalidGenerator, g.name + " is not a generator of the " +
                                              std::string(extension_name(sig.extension)) +
                                              " signature");
      OneCellToken x = sig.x_token();
      FiberSym t = FiberSym::term();
      OneCellPath xonly = make_cell_path(sig, t, {x});
      if (g.name == "alpha")
        return {make_cell_path(sig, t, {x, OneCellToken::shriek(sig.f), OneCellToken::star(sig.f)}),
                xonly};
      if (g.name == "phi")
        return {make_cell_path(sig, t, {x, OneCellToken::star(sig.f1())}),
                make_cell_path(sig, t, {x, OneCellToken::star(sig.f2())})};
      return {make_cell_path(sig, t, {x, OneCellToken::star(sig.f1()), OneCellToken::shriek(sig.f2())}),
              xonly};
    }
    case GenKind::Macro: {
      Diagram d = expand_macro(sig, g);
      return {d.source, d.target};
    }
  }
  fail(ErrorCode::InvalidGenerator, "unknown generator kind");
}

Diagram identity_diagram(const OneCellPath& p) { return {p, p, {}}; }

Layer make_layer(const Signature& sig, const OneCellPath& left, const GenTwoCell& g,
                 const OneCellPath& right) {
  auto [s, t] = generator_boundary(sig, g);
  // Composability checks of left.src.right and left.tgt.right.
  concat(concat(left, s), right);
  concat(concat(left, t), right);
  return {left, g, right};
}

OneCellPath layer_source(const Signature& sig, const Layer& l) {
  return concat(concat(l.left, generator_boundary(sig, l.gen).first), l.right);
}

OneCellPath layer_target(const Signature& sig, const Layer& l) {
  return concat(concat(l.left, generator_boundary(sig, l.gen).second), l.right);
}

Diagram single_layer(const Signature& sig, const OneCellPath& left, const GenTwoCell& g,
                     const OneCellPath& right) {
  Layer l = make_layer(sig, left, g, right);
  return {layer_source(sig, l), layer_target(sig, l), {l}};
}

Diagram generator_diagram(const Signature& sig, const GenTwoCell& g) {
  auto [s, t] = generator_boundary(sig, g);
  return single_layer(sig, empty_cell_path(s.dom), g, empty_cell_path(s.cod));
}

void push_layer(const Signature& sig, Diagram& d, const GenTwoCell& g, std::size_t k) {
  auto [s, t] = generator_boundary(sig, g);
  const OneCellPath& cur = d.target;
  if (k + s.size() > cur.size())
    fail(ErrorCode::BoundaryMismatch, g.str() + " at strand " + std::to_string(k) +
                                          " overruns " + cur.str());
  OneCellPath mid = slice(sig, cur, k, k + s.size());
  if (mid.tokens != s.tokens || (s.tokens.empty() && mid.dom != s.dom))
    fail(ErrorCode::BoundaryMismatch, g.str() + " expects " + s.str() + " at strand " +
                                          std::to_string(k) + " of " + cur.str());
  Layer l{slice(sig, cur, 0, k), g, slice(sig, cur, k + s.size(), cur.size())};
  d.target = concat(concat(l.left, t), l.right);
  d.layers.push_back(std::move(l));
}

Diagram from_offsets(const Signature& sig, const OneCellPath& source,
                     const std::vector<std::pair<GenTwoCell, std::size_t>>& layers) {
  Diagram d = identity_diagram(source);
  for (const auto& [g, k] : layers) push_layer(sig, d, g, k);
  return d;
}

std::vector<OneCellPath> boundaries(const Signature& sig, const Diagram& d) {
  std::vector<OneCellPath> out{d.source};
  for (const auto& l : d.layers) {
    if (layer_source(sig, l) != out.back())
      fail(ErrorCode::BoundaryMismatch, "layer " + std::to_string(out.size() - 1) + " (" +
                                            l.gen.str() + ") does not match " +
                                            out.back().str());
    out.push_back(layer_target(sig, l));
  }
  if (out.back() != d.target)
    fail(ErrorCode::BoundaryMismatch, "diagram target " + d.target.str() + " != " +
                                          out.back().str());
  return out;
}

void validate_diagram(const Signature& sig, const Diagram& d) {
  boundaries(sig, d);
  if (d.source.dom != d.target.dom || d.source.cod != d.target.cod)
    fail(ErrorCode::BoundaryMismatch, "source and target fibers differ");
}

Diagram vcompose(const Signature& sig, const Diagram& d1, const Diagram& d2) {
  (void)sig;
  if (d1.target != d2.source)
    fail(ErrorCode::BoundaryMismatch, d1.target.str() + " vs " + d2.source.str());
  Diagram r{d1.source, d2.target, d1.layers};
  r.layers.insert(r.layers.end(), d2.layers.begin(), d2.layers.end());
  return r;
}

Diagram whisker(const Signature& sig, Side side, const OneCellPath& p, const Diagram& d) {
  (void)sig;
  Diagram r = d;
  if (side == Side::Left) {
    if (p.cod != d.source.dom)
      fail(ErrorCode::BoundaryMismatch, "left whisker " + p.str() + " does not meet " +
                                            d.source.str());
    r.source = concat(p, d.source);
    r.target = concat(p, d.target);
    for (auto& l : r.layers) l.left = concat(p, l.left);
  } else {
    if (d.source.cod != p.dom)
      fail(ErrorCode::BoundaryMismatch, "right whisker " + p.str() + " does not meet " +
                                            d.source.str());
    r.source = concat(d.source, p);
    r.target = concat(d.target, p);
    for (auto& l : r.layers) l.right = concat(l.right, p);
  }
  return r;
}

Diagram hcompose(const Signature& sig, const Diagram& d1, const Diagram& d2) {
  if (d1.source.cod != d2.source.dom)
    fail(ErrorCode::BoundaryMismatch, "hcompose: " + d1.source.str() + " | " + d2.source.str());
  Diagram a = whisker(sig, Side::Right, d2.source, d1);
  Diagram b = whisker(sig, Side::Left, d1.target, d2);
  return exchange_canonical(sig, vcompose(sig, a, b));
}

std::vector<Slot> to_slots(const Signature& sig, const Diagram& d) {
  std::vector<Slot> out;
  out.reserve(d.layers.size());
  for (const auto& l : d.layers) {
    auto [s, t] = generator_boundary(sig, l.gen);
    out.push_back({l.left.size(), s.size(), t.size(), l.gen});
  }
  return out;
}

Diagram from_slots(const Signature& sig, const OneCellPath& source,
                   const std::vector<Slot>& slots) {
  Diagram d = identity_diagram(source);
  for (const auto& s : slots) push_layer(sig, d, s.gen, s.k);
  return d;
}

std::vector<std::pair<Slot, Slot>> exchange_pair(const Slot& upper, const Slot& lower) {
  std::vector<std::pair<Slot, Slot>> out;
  if (lower.k + lower.s <= upper.k) {
    Slot nu = lower;
    Slot nl = upper;
    nl.k = upper.k - lower.s + lower.t;
    out.push_back({nu, nl});
  }
  if (lower.k >= upper.k + upper.t) {
    Slot nu = lower;
    nu.k = lower.k - upper.t + upper.s;
    Slot nl = upper;
    if (out.empty() || out[0].first.k != nu.k || out[0].second.k != nl.k)
      out.push_back({nu, nl});
  }
  return out;
}

std::string slot_key(const Slot& s) {
  return std::to_string(s.k) + ":" + s.gen.str();
}

namespace {

// Canonical form = lexicographically least ordering (by slot key) over the
// whole exchange class, which is enumerated breadth first.
constexpr std::size_t kClassLimit = 4000000;

struct Kind {
  std::size_t s, t;
  std::size_t rank;
};

using State = std::vector<std::uint32_t>;  // kind << 16 | offset

std::string pack(const State& v) {
  return std::string(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(std::uint32_t));
}

bool state_less(const State& a, const State& b, const std::vector<Kind>& kinds) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Kind& ka = kinds[a[i] >> 16];
    const Kind& kb = kinds[b[i] >> 16];
    auto ta = std::make_tuple(a[i] & 0xffff, ka.s == 0 ? 0 : 1, ka.rank);
    auto tb = std::make_tuple(b[i] & 0xffff, kb.s == 0 ? 0 : 1, kb.rank);
    if (ta != tb) return ta < tb;
  }
  return false;
}

std::mutex canon_mu;
std::unordered_map<std::string, std::vector<std::size_t>> canon_cache;

}  // namespace

std::vector<Slot> canonical_slots(const std::vector<Slot>& slots) {
  if (slots.size() < 2) return slots;
  std::vector<std::string> names;
  for (const auto& sl : slots) names.push_back(sl.gen.str());
  std::vector<std::string> sorted = names;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Kind> kinds;
  std::vector<std::size_t> kind_of;
  std::map<std::tuple<std::size_t, std::size_t, std::string>, std::size_t> kind_ids;
  std::string cache_key;
  State start;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    auto key = std::make_tuple(slots[i].s, slots[i].t, names[i]);
    auto [it, fresh] = kind_ids.emplace(key, kinds.size());
    if (fresh) {
      std::size_t rank = std::lower_bound(sorted.begin(), sorted.end(), names[i]) - sorted.begin();
      kinds.push_back({slots[i].s, slots[i].t, rank});
    }
    if (slots[i].k > 0xffff || kinds.size() > 0xffff)
      fail(ErrorCode::SearchLimit, "diagram too wide for canonicalization");
    kind_of.push_back(it->second);
    start.push_back(static_cast<std::uint32_t>(it->second << 16 | slots[i].k));
    cache_key += std::to_string(slots[i].k) + "/" + std::to_string(slots[i].s) + "/" +
                 std::to_string(slots[i].t) + "/" + names[i] + ";";
  }

  std::vector<std::size_t> order;
  {
    std::lock_guard<std::mutex> lock(canon_mu);
    auto it = canon_cache.find(cache_key);
    if (it != canon_cache.end()) order = it->second;
  }
  State best = start;
  if (order.empty()) {
    std::unordered_set<std::string> seen{pack(start)};
    std::vector<State> frontier{start};
    while (!frontier.empty()) {
      std::vector<State> next;
      for (const State& st : frontier) {
        if (state_less(st, best, kinds)) best = st;
        for (std::size_t i = 0; i + 1 < st.size(); ++i) {
          const Kind& ku = kinds[st[i] >> 16];
          const Kind& kl = kinds[st[i + 1] >> 16];
          Slot su{st[i] & 0xffff, ku.s, ku.t, {}};
          Slot sl{st[i + 1] & 0xffff, kl.s, kl.t, {}};
          for (const auto& [nu, nl] : exchange_pair(su, sl)) {
            State ns = st;
            ns[i] = static_cast<std::uint32_t>((st[i + 1] >> 16) << 16 | nu.k);
            ns[i + 1] = static_cast<std::uint32_t>((st[i] >> 16) << 16 | nl.k);
            if (seen.insert(pack(ns)).second) {
              if (seen.size() > kClassLimit)
                fail(ErrorCode::SearchLimit, "exchange class exceeds " +
                                                 std::to_string(kClassLimit) + " arrangements");
              next.push_back(std::move(ns));
            }
          }
        }
      }
      frontier = std::move(next);
    }
    // Map kinds back to concrete slots, first unused slot of each kind.
    std::vector<bool> used(slots.size(), false);
    for (std::uint32_t x : best) {
      std::size_t kind = x >> 16;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!used[i] && kind_of[i] == kind) {
          used[i] = true;
          order.push_back(i);
          order.push_back(x & 0xffff);
          break;
        }
      }
    }
    std::lock_guard<std::mutex> lock(canon_mu);
    canon_cache[cache_key] = order;
  }
  std::vector<Slot> r;
  for (std::size_t i = 0; i < order.size(); i += 2) {
    Slot sl = slots[order[i]];
    sl.k = order[i + 1];
    r.push_back(std::move(sl));
  }
  return r;
}

Diagram exchange_canonical(const Signature& sig, const Diagram& d) {
  auto slots = canonical_slots(to_slots(sig, d));
  Diagram r = from_slots(sig, d.source, slots);
  if (r.target != d.target)
    fail(ErrorCode::BoundaryChanged, "canonicalization changed the target");
  return r;
}

bool isotopic(const Signature& sig, const Diagram& d1, const Diagram& d2) {
  if (d1.source != d2.source || d1.target != d2.target) return false;
  if (d1.layers.size() != d2.layers.size()) return false;
  if (d1 == d2) return true;
  return exchange_canonical(sig, d1) == exchange_canonical(sig, d2);
}

std::optional<Diagram> reorder_layers(const Signature& sig, const Diagram& d,
                                      const std::vector<std::size_t>& order) {
  if (order.size() != d.layers.size()) return std::nullopt;
  std::vector<Slot> slots = to_slots(sig, d);
  std::vector<std::size_t> ids(slots.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    auto it = std::find(ids.begin() + pos, ids.end(), order[pos]);
    if (it == ids.end()) return std::nullopt;
    for (std::size_t j = it - ids.begin(); j > pos; --j) {
      auto sw = exchange_pair(slots[j - 1], slots[j]);
      if (sw.empty()) return std::nullopt;
      slots[j - 1] = sw[0].first;
      slots[j] = sw[0].second;
      std::swap(ids[j - 1], ids[j]);
    }
  }
  return from_slots(sig, d.source, slots);
}

}  // namespace sc
