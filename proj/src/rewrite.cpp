#include "strandcheck/rewrite.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace sc {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

const std::string& need(const Binding& b, const std::string& key, const std::string& rule) {
  auto it = b.find(key);
  if (it == b.end()) fail(ErrorCode::InvalidBinding, rule + " needs parameter " + key);
  return it->second;
}

void require_polygon(const BasePresentation& base, const Path& top, const Path& bottom,
                     const std::string& rule) {
  PolygonCheck c = validate_polygon_type(base, {top, bottom});
  if (!c.ok)
    fail(ErrorCode::SideConditionFailed, rule + ": polygon type (" + path_to_string(top) +
                                             ", " + path_to_string(bottom) + ") rejected: " +
                                             c.message);
}

Path compose_checked(const Path& p, const Path& q, const std::string& rule) {
  if (p.dst != q.src)
    fail(ErrorCode::InvalidBinding, rule + ": " + path_to_string(p) + " does not compose with " +
                                        path_to_string(q));
  return compose_paths(p, q);
}

GenTwoCell chi_of(const Path& top, const Path& bottom) { return GenTwoCell::chi(top, bottom); }

}  // namespace

std::string binding_to_string(const Binding& b) {
  std::string s;
  for (const auto& [k, v] : b) {
    if (!s.empty()) s += ", ";
    s += k + "=" + v;
  }
  return s;
}

Path parse_path(const BasePresentation& base, const std::string& text) {
  std::string t = trim(text);
  if (t.rfind("id(", 0) == 0 && t.size() > 4 && t.back() == ')')
    return base.empty_path(trim(t.substr(3, t.size() - 4)));
  std::vector<std::string> names;
  std::string cur;
  for (char c : t) {
    if (c == ';' || c == ',') {
      names.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  names.push_back(trim(cur));
  for (const auto& n : names)
    if (n.empty()) fail(ErrorCode::ParseError, "empty arrow name in path '" + text + "'");
  return base.path(names);
}

const char* direction_name(Direction d) { return d == Direction::Fwd ? "fwd" : "bwd"; }

const std::vector<std::string>& rule_names() {
  static const std::vector<std::string> names{"R1",   "R2",   "R3.1", "R3.2", "R4.1", "R4.2",
                                              "R5.1", "R5.2", "L1a",  "L1b",  "L1c"};
  return names;
}

RulePair instantiate_rule(const Signature& sig, const std::string& name, const Binding& b) {
  const BasePresentation& base = sig.b();
  auto P = [&](const std::string& key) { return parse_path(base, need(b, key, name)); };
  auto one = [&](const OneCellPath& src, const GenTwoCell& g) { return from_offsets(sig, src, {{g, 0}}); };

  if (name == "R1") {
    Path f = P("f");
    OneCellPath s = star_lift(base, f);
    return {one(s, chi_of(f, f)), identity_diagram(s)};
  }
  if (name == "R2") {
    Path f = P("f"), g = P("g"), h = P("h");
    require_polygon(base, f, g, name);
    require_polygon(base, g, h, name);
    base.record_equal(f, h);
    OneCellPath s = star_lift(base, f);
    return {from_offsets(sig, s, {{chi_of(f, g), 0}, {chi_of(g, h), 0}}), one(s, chi_of(f, h))};
  }
  if (name == "R3.1") {
    Path f = P("f"), g = P("g"), a = P("a");
    require_polygon(base, f, g, name);
    Path fa = compose_checked(f, a, name), ga = compose_checked(g, a, name);
    base.record_equal(fa, ga);
    OneCellPath s = concat(star_lift(base, a), star_lift(base, f));
    return {from_offsets(sig, s, {{chi_of(f, g), a.arrows.size()}}), one(s, chi_of(fa, ga))};
  }
  if (name == "R3.2") {
    Path f = P("f"), g = P("g"), bb = P("b");
    require_polygon(base, f, g, name);
    Path bf = compose_checked(bb, f, name), bg = compose_checked(bb, g, name);
    base.record_equal(bf, bg);
    OneCellPath s = concat(star_lift(base, f), star_lift(base, bb));
    return {one(s, chi_of(f, g)), one(s, chi_of(bf, bg))};
  }
  if (name == "R4.1" || name == "R4.2") {
    const std::string& h = need(b, "h", name);
    const ArrowGen& a = base.arrow(h);
    if (name == "R4.1") {
      OneCellPath s = make_cell_path(sig, FiberSym::of(a.src), {OneCellToken::shriek(h)});
      return {from_offsets(sig, s, {{GenTwoCell::eta(h), 0}, {GenTwoCell::eps(h), 1}}),
              identity_diagram(s)};
    }
    OneCellPath s = make_cell_path(sig, FiberSym::of(a.dst), {OneCellToken::star(h)});
    return {from_offsets(sig, s, {{GenTwoCell::eta(h), 1}, {GenTwoCell::eps(h), 0}}),
            identity_diagram(s)};
  }
  if (name == "R5.1" || name == "R5.2") {
    const std::string& label = need(b, "P", name);
    if (!base.find_square(label))
      fail(ErrorCode::SideConditionFailed, name + ": square " + label + " is not marked");
    GenTwoCell bc = GenTwoCell::macro("BC", {label});
    GenTwoCell bar = GenTwoCell::bcbar(label);
    if (name == "R5.1") {
      OneCellPath s = generator_boundary(sig, bc).first;
      return {from_offsets(sig, s, {{bc, 0}, {bar, 0}}), identity_diagram(s)};
    }
    OneCellPath s = generator_boundary(sig, bar).first;
    return {from_offsets(sig, s, {{bar, 0}, {bc, 0}}), identity_diagram(s)};
  }
  if (name == "L1a") {
    Path f = P("f"), g = P("g");
    require_polygon(base, f, g, name);
    OneCellPath s = star_lift(base, f);
    return {from_offsets(sig, s, {{chi_of(f, g), 0}, {chi_of(g, f), 0}}), identity_diagram(s)};
  }
  if (name == "L1b") {
    Path f = P("f"), g = P("g"), l = P("l"), r = P("r");
    require_polygon(base, f, g, name);
    Path rfl = compose_checked(compose_checked(r, f, name), l, name);
    Path rgl = compose_checked(compose_checked(r, g, name), l, name);
    base.record_equal(rfl, rgl);
    OneCellPath s = concat(concat(star_lift(base, l), star_lift(base, f)), star_lift(base, r));
    return {from_offsets(sig, s, {{chi_of(f, g), l.arrows.size()}}), one(s, chi_of(rfl, rgl))};
  }
  if (name == "L1c") {
    Path f = P("f"), g = P("g"), h = P("h"), k = P("k");
    require_polygon(base, f, g, name);
    require_polygon(base, h, k, name);
    Path hf = compose_checked(h, f, name), kg = compose_checked(k, g, name);
    base.record_equal(hf, kg);
    OneCellPath s = concat(star_lift(base, f), star_lift(base, h));
    return {from_offsets(sig, s, {{chi_of(f, g), 0}, {chi_of(h, k), g.arrows.size()}}),
            one(s, chi_of(hf, kg))};
  }
  fail(ErrorCode::UnknownName, "unknown rule " + name);
}

// ---------------------------------------------------------------- macros

void MacroTable::add(const std::string& name, const Diagram& d) {
  if (is_builtin_macro(name)) fail(ErrorCode::InvalidBinding, "macro " + name + " is builtin");
  if (defs_.count(name)) fail(ErrorCode::InvalidBinding, "duplicate macro " + name);
  defs_[name] = d;
}

const Diagram* MacroTable::find(const std::string& name) const {
  auto it = defs_.find(name);
  return it == defs_.end() ? nullptr : &it->second;
}

namespace {

struct MacroShape {
  std::size_t min_params, max_params, cells;
};

const std::map<std::string, MacroShape>& builtin_shapes() {
  static const std::map<std::string, MacroShape> m{
      {"BC", {1, 1, 0}},       {"mate", {0, 0, 1}},     {"twofold_mate", {0, 0, 1}},
      {"d", {1, 1, 0}},        {"j", {0, 1, 0}},        {"k", {1, 1, 0}},
      {"eta_prime", {0, 0, 0}}, {"mu_prime", {0, 0, 0}}, {"mu", {0, 0, 0}},
      {"F_phi", {0, 0, 1}},    {"F_psi", {0, 0, 1}},    {"G_beta", {0, 0, 1}},
      {"H_alpha", {0, 0, 1}}};
  return m;
}

int index_param(const GenTwoCell& g) {
  const std::string& p = g.params.at(0);
  if (p == "1") return 1;
  if (p == "2") return 2;
  fail(ErrorCode::InvalidBinding, g.name + " index must be 1 or 2, got " + p);
}

std::string pi_of(int i) { return i == 1 ? "pi1" : "pi2"; }

struct Expander {
  const Signature& sig;
  Diagram d;

  Expander(const Signature& s, const OneCellPath& src) : sig(s), d(identity_diagram(src)) {}
  Expander& at(const GenTwoCell& g, std::size_t k) {
    push_expanded(sig, d, g, k);
    return *this;
  }
};

void expect_boundary(const Signature& sig, const GenTwoCell& macro, const GenTwoCell& arg,
                     const OneCellPath& src, const OneCellPath& tgt) {
  auto [s, t] = generator_boundary(sig, arg);
  if (s != src || t != tgt)
    fail(ErrorCode::InvalidBinding, macro.name + " expects an argument " + src.str() + " => " +
                                        tgt.str() + ", got " + s.str() + " => " + t.str());
}

// chi(<g,f>;<k,h>) arguments of the mate constructions.
void mate_parts(const Signature& sig, const GenTwoCell& g, std::string& gg, std::string& ff,
                std::string& kk, std::string& hh) {
  if (g.args.size() != 1 || g.args[0].kind != GenKind::Chi)
    fail(ErrorCode::InvalidBinding, g.name + " expects a chi generator");
  const PolygonType& pt = g.args[0].pt;
  if (pt.top.arrows.size() != 2 || pt.bottom.arrows.size() != 2)
    fail(ErrorCode::InvalidBinding, g.name + " expects a square-shaped chi");
  PolygonCheck c = validate_polygon_type(sig.b(), pt);
  if (!c.ok) fail(ErrorCode::SideConditionFailed, g.name + ": " + c.message);
  gg = pt.top.arrows[0];
  ff = pt.top.arrows[1];
  kk = pt.bottom.arrows[0];
  hh = pt.bottom.arrows[1];
}

}  // namespace

bool is_builtin_macro(const std::string& name) { return builtin_shapes().count(name) > 0; }

std::size_t macro_cell_arity(const std::string& name) {
  auto it = builtin_shapes().find(name);
  return it == builtin_shapes().end() ? 0 : it->second.cells;
}

Diagram expand_macro(const Signature& sig, const GenTwoCell& g) {
  if (g.kind != GenKind::Macro) return generator_diagram(sig, g);
  const BasePresentation& base = sig.b();
  auto shape_it = builtin_shapes().find(g.name);
  if (shape_it == builtin_shapes().end()) {
    const Diagram* user = sig.user_macros ? sig.user_macros->find(g.name) : nullptr;
    if (!user) fail(ErrorCode::UnknownName, "unknown macro " + g.name);
    if (!g.params.empty() || !g.args.empty())
      fail(ErrorCode::InvalidBinding, "macro " + g.name + " takes no parameters");
    return expand_all(sig, *user);
  }
  const MacroShape& shape = shape_it->second;
  if (g.params.size() < shape.min_params || g.params.size() > shape.max_params ||
      g.args.size() != shape.cells)
    fail(ErrorCode::InvalidBinding, "wrong arguments for macro " + g.str());

  auto star = [](const std::string& a) { return OneCellToken::star(a); };
  auto shriek = [](const std::string& a) { return OneCellToken::shriek(a); };
  auto cell = [&](std::vector<OneCellToken> toks) {
    FiberSym dom = toks.empty() ? FiberSym::term() : token_dom(sig, toks.front());
    return make_cell_path(sig, dom, std::move(toks));
  };
  auto P = [&](std::vector<std::string> arrows) { return base.path(arrows); };
  const std::string& f = sig.f;

  if (g.name == "BC") {
    const PullbackSquare* sq = base.find_square(g.params[0]);
    if (!sq) fail(ErrorCode::InvalidBinding, "square " + g.params[0] + " is not marked");
    return Expander(sig, cell({star(sq->a), shriek(sq->c)}))
        .at(GenTwoCell::eta(sq->d), 0)
        .at(chi_of(P({sq->a, sq->d}), P({sq->c, sq->b})), 1)
        .at(GenTwoCell::eps(sq->c), 2)
        .d;
  }
  if (g.name == "mate") {
    std::string gg, ff, kk, hh;
    mate_parts(sig, g, gg, ff, kk, hh);
    return Expander(sig, cell({star(gg), shriek(kk)}))
        .at(GenTwoCell::eta(ff), 0)
        .at(g.args[0], 1)
        .at(GenTwoCell::eps(kk), 2)
        .d;
  }
  if (g.name == "twofold_mate") {
    std::string gg, ff, kk, hh;
    mate_parts(sig, g, gg, ff, kk, hh);
    return Expander(sig, cell({shriek(kk), shriek(hh)}))
        .at(GenTwoCell::eta(gg), 0)
        .at(GenTwoCell::eta(ff), 1)
        .at(g.args[0], 2)
        .at(GenTwoCell::eps(kk), 3)
        .at(GenTwoCell::eps(hh), 2)
        .d;
  }

  const std::string f1 = sig.f1(), f2 = sig.f2();
  auto fi = [&](int i) { return i == 1 ? f1 : f2; };
  const std::string bobj = base.arrow(f).src;

  if (g.name == "d") {
    int i = index_param(g);
    return Expander(sig, empty_cell_path(FiberSym::of(bobj)))
        .at(chi_of(base.empty_path(bobj), P({"Delta", fi(i)})), 0)
        .d;
  }
  if (g.name == "j") {
    PolygonType pt;
    if (g.params.empty()) {
      pt = {P({"pi2", f2}), P({"pi1", f1})};
    } else {
      int i = index_param(g);
      pt = {P({"pi", fi(i)}), P({pi_of(3 - i), fi(i)})};
    }
    return generator_diagram(sig, GenTwoCell::chi(pt));
  }
  if (g.name == "k") {
    int i = index_param(g);
    GenTwoCell ji = chi_of(P({"pi", fi(i)}), P({pi_of(3 - i), fi(i)}));
    return expand_macro(sig, GenTwoCell::macro("twofold_mate", {}, {ji}));
  }
  if (g.name == "eta_prime") {
    return Expander(sig, empty_cell_path(FiberSym::of(bobj)))
        .at(GenTwoCell::macro("d", {"1"}), 0)
        .at(GenTwoCell::eta(f2), 1)
        .at(chi_of(P({"Delta", f2}), base.empty_path(bobj)), 2)
        .d;
  }
  if (g.name == "mu_prime") {
    return Expander(sig, cell({star(f1), shriek(f2), star(f1), shriek(f2)}))
        .at(GenTwoCell::bcbar("P2"), 1)
        .at(chi_of(P({"pi2", f1}), P({"pi", f1})), 0)
        .at(GenTwoCell::macro("k", {"2"}), 2)
        .at(GenTwoCell::eps("pi"), 1)
        .d;
  }
  if (g.name == "mu") {
    return Expander(sig, cell({shriek(f), star(f), shriek(f), star(f)}))
        .at(GenTwoCell::eps(f), 1)
        .d;
  }

  OneCellToken x = sig.x_token();
  const GenTwoCell& arg = g.args[0];
  if (g.name == "F_phi" || g.name == "F_psi") {
    bool phi = g.name == "F_phi";
    expect_boundary(sig, g, arg, cell({x, shriek(f), star(f)}), cell({x}));
    Path top = P({phi ? f1 : f2, f}), bot = P({phi ? f2 : f1, f});
    return Expander(sig, cell({x, star(phi ? f1 : f2)}))
        .at(GenTwoCell::eta(f), 1)
        .at(chi_of(top, bot), 2)
        .at(arg, 0)
        .d;
  }
  if (g.name == "G_beta") {
    expect_boundary(sig, g, arg, cell({x, star(f1)}), cell({x, star(f2)}));
    return Expander(sig, cell({x, star(f1), shriek(f2)})).at(arg, 0).at(GenTwoCell::eps(f2), 1).d;
  }
  if (g.name == "H_alpha") {
    expect_boundary(sig, g, arg, cell({x, star(f1), shriek(f2)}), cell({x}));
    return Expander(sig, cell({x, shriek(f), star(f)}))
        .at(GenTwoCell::bcbar(sig.kernel_square), 1)
        .at(arg, 0)
        .d;
  }
  fail(ErrorCode::UnknownName, "unknown macro " + g.name);
}

void push_expanded(const Signature& sig, Diagram& d, const GenTwoCell& g, std::size_t k) {
  if (g.kind != GenKind::Macro) {
    push_layer(sig, d, g, k);
    return;
  }
  Diagram e = expand_macro(sig, g);
  const OneCellPath& cur = d.target;
  if (k + e.source.size() > cur.size() ||
      slice(sig, cur, k, k + e.source.size()).tokens != e.source.tokens)
    fail(ErrorCode::BoundaryMismatch, g.str() + " expects " + e.source.str() + " at strand " +
                                          std::to_string(k) + " of " + cur.str());
  if (e.source.tokens.empty() && fiber_at(sig, cur, k) != e.source.dom)
    fail(ErrorCode::BoundaryMismatch, g.str() + " placed over the wrong fiber");
  for (const auto& l : e.layers) push_layer(sig, d, l.gen, k + l.left.size());
}

Diagram expand_all(const Signature& sig, const Diagram& d) {
  Diagram r = identity_diagram(d.source);
  for (const auto& l : d.layers) push_expanded(sig, r, l.gen, l.left.size());
  if (r.target != d.target) fail(ErrorCode::BoundaryMismatch, "expansion changed the target");
  return r;
}

// ---------------------------------------------------------------- steps

std::string position_to_string(const Position& p) {
  std::string range = p.count == 0
                          ? std::to_string(p.first) + ".." + std::to_string(long(p.first) - 1)
                          : std::to_string(p.first) + ".." + std::to_string(p.first + p.count - 1);
  return "layers:" + range + ", strand:" + std::to_string(p.strand);
}

std::string justification_to_string(const ProofStep& s) {
  switch (s.kind) {
    case StepKind::Rule:
      return "rule " + s.name + "(" + binding_to_string(s.binding) + ") " + direction_name(s.dir);
    case StepKind::MacroFold: return "macro fold " + s.macro.str();
    case StepKind::MacroUnfold: return "macro unfold " + s.macro.str();
    case StepKind::Coherence: return "coherence";
    case StepKind::Axiom: return "axiom " + s.name + " " + direction_name(s.dir);
    case StepKind::Prior: return "prior " + s.name + " " + direction_name(s.dir);
    case StepKind::Canonical: return "canonical";
  }
  return "";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "Verified";
    case Verdict::Failed: return "Failed";
    case Verdict::Skipped: return "Skipped";
  }
  return "";
}

const ProofScript* Session::find_verified(const std::string& name) const {
  auto it = verified_.find(name);
  return it == verified_.end() ? nullptr : &it->second;
}

void Session::add_verified(const ProofScript& s) { verified_[s.name] = s; }

namespace {

Diagram sub_diagram(const Diagram& d, const std::vector<OneCellPath>& bnds, std::size_t first,
                    std::size_t count) {
  Diagram r{bnds[first], bnds[first + count], {}};
  r.layers.assign(d.layers.begin() + first, d.layers.begin() + first + count);
  return r;
}

std::vector<std::string> gen_multiset(const std::vector<Layer>& ls) {
  std::vector<std::string> v;
  for (const auto& l : ls) v.push_back(l.gen.str());
  std::sort(v.begin(), v.end());
  return v;
}

// Whiskers (left, right) placing a pattern with source psrc at strand k of top.
bool fit_whiskers(const Signature& sig, const OneCellPath& top, const OneCellPath& psrc,
                  std::size_t k, OneCellPath& left, OneCellPath& right) {
  if (k + psrc.size() > top.size()) return false;
  if (slice(sig, top, k, k + psrc.size()).tokens != psrc.tokens) return false;
  if (fiber_at(sig, top, k) != psrc.dom) return false;
  left = slice(sig, top, 0, k);
  right = slice(sig, top, k + psrc.size(), top.size());
  return true;
}

}  // namespace

Diagram rewrite_at(const Signature& sig, const Diagram& d, const Diagram& pattern,
                   const Diagram& replacement, const Position& pos) {
  auto bnds = boundaries(sig, d);
  if (pos.first + pos.count > d.layers.size() || pos.count != pattern.layers.size())
    fail(ErrorCode::PatternNotFound, "block " + position_to_string(pos) + " does not fit a " +
                                         std::to_string(pattern.layers.size()) +
                                         "-layer pattern");
  OneCellPath left, right;
  if (!fit_whiskers(sig, bnds[pos.first], pattern.source, pos.strand, left, right))
    fail(ErrorCode::PatternNotFound, "pattern source " + pattern.source.str() +
                                         " not found at " + position_to_string(pos) + " in " +
                                         bnds[pos.first].str());
  Diagram wp = whisker(sig, Side::Right, right, whisker(sig, Side::Left, left, pattern));
  Diagram block = sub_diagram(d, bnds, pos.first, pos.count);
  if (!isotopic(sig, block, wp))
    fail(ErrorCode::PatternNotFound, "block at " + position_to_string(pos) +
                                         " does not match the pattern");
  Diagram wr = whisker(sig, Side::Right, right, whisker(sig, Side::Left, left, replacement));
  Diagram r{d.source, d.target, {}};
  r.layers.assign(d.layers.begin(), d.layers.begin() + pos.first);
  r.layers.insert(r.layers.end(), wr.layers.begin(), wr.layers.end());
  r.layers.insert(r.layers.end(), d.layers.begin() + pos.first + pos.count, d.layers.end());
  boundaries(sig, r);
  return r;
}

std::optional<Position> find_pattern(const Signature& sig, const Diagram& d,
                                     const Diagram& pattern) {
  auto bnds = boundaries(sig, d);
  std::size_t len = pattern.layers.size();
  auto want = gen_multiset(pattern.layers);
  for (std::size_t first = 0; first + len <= d.layers.size(); ++first) {
    std::vector<Layer> blk(d.layers.begin() + first, d.layers.begin() + first + len);
    if (gen_multiset(blk) != want) continue;
    Diagram block = sub_diagram(d, bnds, first, len);
    for (std::size_t k = 0; k <= bnds[first].size(); ++k) {
      OneCellPath left, right;
      if (!fit_whiskers(sig, bnds[first], pattern.source, k, left, right)) continue;
      Diagram wp = whisker(sig, Side::Right, right, whisker(sig, Side::Left, left, pattern));
      if (wp.target != block.target) continue;
      if (isotopic(sig, block, wp)) return Position{first, len, k};
    }
  }
  return std::nullopt;
}

RulePair step_pattern(const Signature& sig, const ProofStep& step, const Session& session) {
  RulePair rp;
  switch (step.kind) {
    case StepKind::Rule: rp = instantiate_rule(sig, step.name, step.binding); break;
    case StepKind::MacroUnfold:
    case StepKind::MacroFold: {
      if (step.macro.kind != GenKind::Macro)
        fail(ErrorCode::InvalidBinding, step.macro.str() + " is not a macro");
      rp = {generator_diagram(sig, step.macro), expand_macro(sig, step.macro)};
      if (step.kind == StepKind::MacroFold) std::swap(rp.lhs, rp.rhs);
      return rp;
    }
    case StepKind::Axiom: {
      if (session.disabled_axioms.count(step.name))
        fail(ErrorCode::UnprovenDependency, "axiom " + step.name + " is disabled");
      bool found = false;
      for (auto& ax : axiom_equations(sig)) {
        if (ax.name == step.name) {
          rp = {ax.lhs, ax.rhs};
          found = true;
        }
      }
      if (!found)
        fail(ErrorCode::UnknownName, "axiom " + step.name + " is not available in the " +
                                         extension_name(sig.extension) + " signature");
      break;
    }
    case StepKind::Prior: {
      const ProofScript* p = session.find_verified(step.name);
      if (!p) fail(ErrorCode::UnprovenDependency, "prior equality " + step.name + " is not verified");
      if (p->sig.extension != Extension::None && p->sig.extension != sig.extension)
        fail(ErrorCode::InvalidBinding, "prior equality " + step.name +
                                            " lives in another extension");
      rp = {p->lhs, p->rhs};
      break;
    }
    default: fail(ErrorCode::InvalidBinding, "step has no pattern");
  }
  if (step.dir == Direction::Bwd) std::swap(rp.lhs, rp.rhs);
  return rp;
}

namespace {

Diagram apply_coherence(const Signature& sig, const Diagram& prev, const ProofStep& step) {
  const Diagram& res = step.result;
  std::size_t a = step.pos.first, cnt = step.pos.count;
  std::size_t n = prev.layers.size(), m = res.layers.size();
  if (a + cnt > n) fail(ErrorCode::PatternNotFound, "coherence region out of range");
  for (std::size_t i = a; i < a + cnt; ++i)
    if (prev.layers[i].gen.kind != GenKind::Chi)
      fail(ErrorCode::RegionNotPureChi, "layer " + std::to_string(i) + " (" +
                                            prev.layers[i].gen.str() + ") is not a chi");
  std::size_t tail = n - a - cnt;
  if (m < a + tail) fail(ErrorCode::ResultMismatch, "coherence result is too short");
  for (std::size_t i = 0; i < a; ++i)
    if (prev.layers[i] != res.layers[i])
      fail(ErrorCode::ResultMismatch, "coherence changed layer " + std::to_string(i) +
                                          " outside the region");
  for (std::size_t i = 0; i < tail; ++i)
    if (prev.layers[a + cnt + i] != res.layers[m - tail + i])
      fail(ErrorCode::ResultMismatch, "coherence changed a layer below the region");
  for (std::size_t i = a; i < m - tail; ++i)
    if (res.layers[i].gen.kind != GenKind::Chi)
      fail(ErrorCode::RegionNotPureChi, "replacement layer " + std::to_string(i) +
                                            " is not a chi");
  auto pb = boundaries(sig, prev);
  auto rb = boundaries(sig, res);
  if (pb[a + cnt] != rb[m - tail])
    fail(ErrorCode::BoundaryChanged, "replacement region boundary " + rb[m - tail].str() +
                                         " differs from " + pb[a + cnt].str());
  return res;
}

}  // namespace

Diagram apply_step(const Signature& sig, const Diagram& prev, const ProofStep& step,
                   const Session& session) {
  if (step.kind == StepKind::Canonical) return step.result;
  if (step.kind == StepKind::Coherence) return apply_coherence(sig, prev, step);
  RulePair rp = step_pattern(sig, step, session);
  try {
    return rewrite_at(sig, prev, rp.lhs, rp.rhs, step.pos);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PatternNotFound) throw;
    Diagram canon = exchange_canonical(sig, prev);
    if (canon == prev) throw;
    try {
      return rewrite_at(sig, canon, rp.lhs, rp.rhs, step.pos);
    } catch (const Error&) {
      throw e;
    }
  }
}

namespace {

std::string step_label(const ProofStep& s) {
  switch (s.kind) {
    case StepKind::Rule: return s.name;
    case StepKind::MacroFold: return "fold " + s.macro.name;
    case StepKind::MacroUnfold: return "unfold " + s.macro.name;
    case StepKind::Coherence: return "coherence";
    case StepKind::Axiom: return s.name;
    case StepKind::Prior: return "prior " + s.name;
    case StepKind::Canonical: return "canonical";
  }
  return "";
}

}  // namespace

CheckReport check_script(const ProofScript& s, Session& session) {
  auto t0 = std::chrono::steady_clock::now();
  CheckReport rep;
  rep.script = s.name;
  const Signature& sig = s.sig;
  long idx = -1;
  try {
    validate_diagram(sig, s.lhs);
    validate_diagram(sig, s.rhs);
    if (s.lhs.source != s.rhs.source || s.lhs.target != s.rhs.target)
      fail(ErrorCode::BoundaryMismatch, "claim sides have different boundaries");
    for (const auto& dep : s.requires_)
      if (!session.is_verified(dep))
        fail(ErrorCode::UnprovenDependency, "required script " + dep + " is not verified");
    Diagram prev = s.lhs;
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
      idx = long(i);
      const ProofStep& st = s.steps[i];
      validate_diagram(sig, st.result);
      if (st.result.source != prev.source || st.result.target != prev.target)
        fail(ErrorCode::BoundaryChanged, "stated result changes the boundary");
      if (st.kind == StepKind::Canonical) {
        if (!isotopic(sig, prev, st.result))
          fail(ErrorCode::ResultMismatch, "stated result is not isotopic to the previous diagram");
      } else {
        Diagram got = apply_step(sig, prev, st, session);
        if (!isotopic(sig, got, st.result))
          fail(ErrorCode::ResultMismatch, "stated result is not isotopic to the rewritten diagram");
      }
      rep.rules_used[step_label(st)]++;
      rep.steps_checked++;
      prev = st.result;
    }
    idx = long(s.steps.size());
    if (!isotopic(sig, prev, s.rhs))
      fail(ErrorCode::ResultMismatch, "final diagram is not isotopic to the claimed right side");
    session.add_verified(s);
  } catch (const Error& e) {
    rep.verdict = Verdict::Failed;
    rep.failed_step = idx;
    rep.error = e.code();
    std::string where = idx < 0 ? std::string("claim")
                        : std::size_t(idx) < s.steps.size()
                            ? "step " + std::to_string(idx + 1) + " (" +
                                  justification_to_string(s.steps[idx]) + ")"
                            : std::string("final comparison");
    rep.reason = where + ": " + e.what();
  }
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::vector<CheckReport> check_all(const std::vector<ProofScript>& scripts, Session& session) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < scripts.size(); ++i) index[scripts[i].name] = i;
  auto deps_of = [&](const ProofScript& s) {
    std::set<std::string> deps(s.requires_.begin(), s.requires_.end());
    for (const auto& st : s.steps)
      if (st.kind == StepKind::Prior) deps.insert(st.name);
    return deps;
  };
  std::vector<std::optional<CheckReport>> out(scripts.size());
  std::size_t done = 0;
  while (done < scripts.size()) {
    bool progress = false;
    for (std::size_t i = 0; i < scripts.size(); ++i) {
      if (out[i]) continue;
      auto deps = deps_of(scripts[i]);
      bool ready = true;
      std::string blocked;
      for (const auto& dep : deps) {
        auto it = index.find(dep);
        if (it == index.end()) continue;
        if (!out[it->second]) {
          ready = false;
          break;
        }
        if (out[it->second]->verdict != Verdict::Verified) blocked = dep;
      }
      if (!ready) continue;
      if (!blocked.empty()) {
        CheckReport r;
        r.script = scripts[i].name;
        r.verdict = Verdict::Skipped;
        r.error = ErrorCode::UnprovenDependency;
        r.reason = "dependency " + blocked + " was not verified";
        out[i] = r;
      } else {
        out[i] = check_script(scripts[i], session);
      }
      ++done;
      progress = true;
    }
    if (!progress) {
      for (std::size_t i = 0; i < scripts.size(); ++i) {
        if (out[i]) continue;
        out[i] = check_script(scripts[i], session);
        ++done;
      }
    }
  }
  std::vector<CheckReport> r;
  for (auto& o : out) r.push_back(*o);
  return r;
}

}  // namespace sc
