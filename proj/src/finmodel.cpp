#include "strandcheck/finmodel.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "strandcheck/rewrite.hpp"

namespace sc {

namespace {

ElemSet sorted_unique(ElemSet v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

const ElemSet& fiber_of(const Family& x, const Elem& e) {
  static const ElemSet empty;
  auto it = x.fibers.find(e);
  return it == x.fibers.end() ? empty : it->second;
}

Elem pair_label(const Elem& a, const Elem& b) { return "(" + a + "," + b + ")"; }

void require_over(const Family& x, const FiberSym& s, const std::string& what) {
  if (x.over != s)
    fail(ErrorCode::TypeMismatch, what + " expects a family over " + s.str() + ", got " +
                                      x.over.str());
}

}  // namespace

const ElemSet& FinInstance::of(const std::string& obj) const {
  auto it = carrier.find(obj);
  if (it == carrier.end()) fail(ErrorCode::UnknownName, "instance has no carrier for " + obj);
  return it->second;
}

const Elem& FinInstance::apply(const std::string& arrow, const Elem& x) const {
  auto it = action.find(arrow);
  if (it == action.end()) fail(ErrorCode::UnknownName, "instance has no action for " + arrow);
  auto jt = it->second.find(x);
  if (jt == it->second.end())
    fail(ErrorCode::TypeMismatch, "action of " + arrow + " undefined at " + x);
  return jt->second;
}

Elem FinInstance::apply(const Path& p, const Elem& x) const {
  Elem cur = x;
  for (const auto& a : p.arrows) cur = apply(a, cur);
  return cur;
}

FinInstance make_instance(const ElemSet& A, const ElemSet& B, const std::map<Elem, Elem>& f) {
  FinInstance inst;
  inst.carrier["A"] = sorted_unique(A);
  inst.carrier["B"] = sorted_unique(B);
  for (const auto& b : inst.carrier["B"]) {
    auto it = f.find(b);
    if (it == f.end() || !std::binary_search(inst.carrier["A"].begin(), inst.carrier["A"].end(),
                                             it->second))
      fail(ErrorCode::RelationViolated, "f is not a total function B -> A at " + b);
    inst.action["f"][b] = it->second;
  }
  std::vector<std::pair<Elem, Elem>> q;
  for (const auto& b : inst.carrier["B"])
    for (const auto& b2 : inst.carrier["B"])
      if (f.at(b) == f.at(b2)) q.push_back({b, b2});
  for (const auto& [b, b2] : q) {
    Elem l = pair_label(b, b2);
    inst.carrier["Q"].push_back(l);
    inst.action["f1"][l] = b;
    inst.action["f2"][l] = b2;
  }
  for (const auto& b : inst.carrier["B"]) inst.action["Delta"][b] = pair_label(b, b);
  for (const auto& q1 : q)
    for (const auto& q2 : q) {
      if (q2.second != q1.first) continue;
      Elem l1 = pair_label(q1.first, q1.second), l2 = pair_label(q2.first, q2.second);
      Elem r = pair_label(l1, l2);
      inst.carrier["R"].push_back(r);
      inst.action["pi1"][r] = l1;
      inst.action["pi2"][r] = l2;
      inst.action["pi"][r] = pair_label(q2.first, q1.second);
    }
  inst.carrier["Q"] = sorted_unique(inst.carrier["Q"]);
  inst.carrier["R"] = sorted_unique(inst.carrier["R"]);
  for (const char* a : {"f1", "f2", "Delta", "pi1", "pi2", "pi"}) inst.action[a];
  return inst;
}

FinInstance random_instance(std::size_t max_size, std::mt19937_64& rng) {
  std::size_t nb = std::uniform_int_distribution<std::size_t>(0, max_size)(rng);
  std::size_t na = std::uniform_int_distribution<std::size_t>(nb == 0 ? 0 : 1,
                                                              std::max<std::size_t>(1, max_size))(rng);
  if (max_size == 0) na = 0;
  ElemSet A, B;
  std::map<Elem, Elem> f;
  for (std::size_t i = 0; i < na; ++i) A.push_back("a" + std::to_string(i));
  for (std::size_t i = 0; i < nb; ++i) {
    B.push_back("b" + std::to_string(i));
    f[B.back()] = A[std::uniform_int_distribution<std::size_t>(0, na - 1)(rng)];
  }
  return make_instance(A, B, f);
}

void check_instance(const BasePresentation& base, const FinInstance& inst) {
  for (const auto& a : base.arrows()) {
    const ElemSet& dst = inst.of(a.dst);
    for (const auto& x : inst.of(a.src))
      if (!std::binary_search(dst.begin(), dst.end(), inst.apply(a.name, x)))
        fail(ErrorCode::RelationViolated, a.name + " leaves " + a.dst + " at " + x);
  }
  for (const auto& r : base.relations())
    for (const auto& x : inst.of(r.lhs.src))
      if (inst.apply(r.lhs, x) != inst.apply(r.rhs, x))
        fail(ErrorCode::RelationViolated, path_to_string(r.lhs) + " = " + path_to_string(r.rhs) +
                                              " fails at " + x);
  for (const auto& sq : base.squares()) {
    const ArrowGen& a = base.arrow(sq.a);
    const ArrowGen& c = base.arrow(sq.c);
    const ArrowGen& d = base.arrow(sq.d);
    const ArrowGen& b = base.arrow(sq.b);
    std::set<std::pair<Elem, Elem>> cone, want;
    for (const auto& t : inst.of(a.src)) cone.insert({inst.apply(a.name, t), inst.apply(c.name, t)});
    for (const auto& u : inst.of(d.src))
      for (const auto& v : inst.of(b.src))
        if (inst.apply(d.name, u) == inst.apply(b.name, v)) want.insert({u, v});
    if (cone != want || cone.size() != inst.of(a.src).size())
      fail(ErrorCode::RelationViolated, "square " + sq.label + " is not a pullback");
  }
}

std::size_t Family::total() const {
  std::size_t n = 0;
  for (const auto& [k, v] : fibers) n += v.size();
  return n;
}

bool FamilyMap::is_identity() const {
  if (src != dst) return false;
  for (const auto& [e, comp] : components)
    for (const auto& [x, y] : comp)
      if (x != y) return false;
  return true;
}

Elem tag(const Elem& index, const Elem& x) { return "<" + index + ":" + x + ">"; }

std::pair<Elem, Elem> untag(const Elem& e) {
  std::size_t colon = e.find(':');
  if (e.size() < 3 || e.front() != '<' || e.back() != '>' || colon == std::string::npos)
    fail(ErrorCode::TypeMismatch, "element " + e + " is not tagged");
  return {e.substr(1, colon - 1), e.substr(colon + 1, e.size() - colon - 2)};
}

Family terminal_family() {
  Family x;
  x.over = FiberSym::term();
  x.fibers["*"] = {};
  return x;
}

FamilyMap identity_map(const Family& x) {
  FamilyMap m{x, x, {}};
  for (const auto& [e, fib] : x.fibers) {
    auto& comp = m.components[e];
    for (const auto& v : fib) comp[v] = v;
  }
  return m;
}

FamilyMap compose(const FamilyMap& first, const FamilyMap& second) {
  if (first.dst != second.src)
    fail(ErrorCode::NonComposable, "family maps do not compose");
  FamilyMap m{first.src, second.dst, {}};
  for (const auto& [e, comp] : first.components) {
    auto& out = m.components[e];
    const auto& next = second.components.at(e);
    for (const auto& [x, y] : comp) out[x] = next.at(y);
  }
  return m;
}

Family interpret_token(const Signature& sig, const OneCellToken& t, const FinInstance& inst,
                       const Family& x, const Env& env) {
  Family out;
  out.over = token_cod(sig, t);
  require_over(x, token_dom(sig, t), t.str());
  switch (t.kind) {
    case TokKind::Obj: {
      auto it = env.objects.find(t.name);
      if (it == env.objects.end()) fail(ErrorCode::EnvMissing, "no family assigned to " + t.name);
      require_over(it->second, out.over, t.name);
      return it->second;
    }
    case TokKind::Star: {
      for (const auto& a : inst.of(out.over.obj))
        out.fibers[a] = fiber_of(x, inst.apply(t.name, a));
      return out;
    }
    case TokKind::Shriek: {
      for (const auto& b : inst.of(out.over.obj)) out.fibers[b];
      for (const auto& a : inst.of(x.over.obj)) {
        auto& fib = out.fibers[inst.apply(t.name, a)];
        for (const auto& v : fiber_of(x, a)) fib.push_back(tag(a, v));
      }
      for (auto& [b, fib] : out.fibers) fib = sorted_unique(fib);
      return out;
    }
  }
  return out;
}

Family interpret_path(const Signature& sig, const OneCellPath& p, const FinInstance& inst,
                      const Family& input, const Env& env) {
  require_over(input, p.dom, "path " + p.str());
  Family cur = input;
  for (const auto& t : p.tokens) cur = interpret_token(sig, t, inst, cur, env);
  return cur;
}

namespace {

FamilyMap map_token(const Signature& sig, const OneCellToken& t, const FinInstance& inst,
                    const FamilyMap& m, const Env& env) {
  FamilyMap out;
  out.src = interpret_token(sig, t, inst, m.src, env);
  out.dst = interpret_token(sig, t, inst, m.dst, env);
  switch (t.kind) {
    case TokKind::Obj:
      if (!m.is_identity()) fail(ErrorCode::TypeMismatch, "object generator on a non-identity");
      return identity_map(out.src);
    case TokKind::Star:
      for (const auto& a : inst.of(out.src.over.obj)) {
        auto it = m.components.find(inst.apply(t.name, a));
        out.components[a] = it == m.components.end() ? std::map<Elem, Elem>{} : it->second;
      }
      return out;
    case TokKind::Shriek:
      for (const auto& b : inst.of(out.src.over.obj)) out.components[b];
      for (const auto& a : inst.of(m.src.over.obj)) {
        auto& comp = out.components[inst.apply(t.name, a)];
        auto it = m.components.find(a);
        if (it == m.components.end()) continue;
        for (const auto& [x, y] : it->second) comp[tag(a, x)] = tag(a, y);
      }
      return out;
  }
  return out;
}

FamilyMap interpret_generator(const Signature& sig, const GenTwoCell& g, const FinInstance& inst,
                              const Env& env, const Family& z);

FamilyMap interpret_from(const Signature& sig, const Diagram& d, const FinInstance& inst,
                         const Env& env, const Family& input) {
  FamilyMap total = identity_map(interpret_path(sig, d.source, inst, input, env));
  for (const auto& l : d.layers) {
    Family z = interpret_path(sig, l.left, inst, input, env);
    FamilyMap m = interpret_generator(sig, l.gen, inst, env, z);
    for (const auto& t : l.right.tokens) m = map_token(sig, t, inst, m, env);
    total = compose(total, m);
  }
  return total;
}

FamilyMap interpret_generator(const Signature& sig, const GenTwoCell& g, const FinInstance& inst,
                              const Env& env, const Family& z) {
  auto [gs, gt] = generator_boundary(sig, g);
  Family s = interpret_path(sig, gs, inst, z, env);
  Family t = interpret_path(sig, gt, inst, z, env);
  FamilyMap m{s, t, {}};
  switch (g.kind) {
    case GenKind::Chi:
      if (s != t) fail(ErrorCode::TypeMismatch, g.str() + " relates unequal reindexings");
      return identity_map(s);
    case GenKind::Eta:
      for (const auto& [b, fib] : s.fibers) {
        auto& comp = m.components[b];
        for (const auto& x : fib) comp[x] = tag(b, x);
      }
      return m;
    case GenKind::Eps:
      for (const auto& [a, fib] : s.fibers) {
        auto& comp = m.components[a];
        for (const auto& e : fib) comp[e] = untag(e).second;
      }
      return m;
    case GenKind::BCbar: {
      const PullbackSquare* sq = sig.b().find_square(g.name);
      if (!sq) fail(ErrorCode::InvalidGenerator, "square " + g.name + " is not marked");
      FamilyMap fwd = interpret_from(sig, expand_macro(sig, GenTwoCell::macro("BC", {g.name})),
                                     inst, env, z);
      if (fwd.src != t || fwd.dst != s)
        fail(ErrorCode::TypeMismatch, "comparison of " + g.name + " has the wrong boundary");
      for (const auto& [e, comp] : fwd.components) {
        auto& inv = m.components[e];
        for (const auto& [x, y] : comp)
          if (!inv.emplace(y, x).second)
            fail(ErrorCode::RelationViolated, "comparison of " + g.name + " is not injective");
        if (inv.size() != fiber_of(s, e).size())
          fail(ErrorCode::RelationViolated, "comparison of " + g.name + " is not surjective");
      }
      for (const auto& [e, fib] : s.fibers) m.components[e];
      return m;
    }
    case GenKind::Descent: {
      auto it = env.generators.find(g.name);
      if (it == env.generators.end())
        fail(ErrorCode::EnvMissing, "no value assigned to generator " + g.name);
      for (const auto& [over, fib] : s.fibers) {
        auto& comp = m.components[over];
        const ElemSet& dst = fiber_of(t, over);
        for (const auto& x : fib) {
          Elem y = it->second(over, x);
          if (!std::binary_search(dst.begin(), dst.end(), y))
            fail(ErrorCode::TypeMismatch, g.name + " sends " + x + " outside its target");
          comp[x] = y;
        }
      }
      return m;
    }
    case GenKind::Macro:
      return interpret_from(sig, expand_macro(sig, g), inst, env, z);
  }
  return m;
}

}  // namespace

FamilyMap interpret_diagram(const Signature& sig, const Diagram& d, const FinInstance& inst,
                            const Env& env, const Family& input) {
  FamilyMap m = interpret_from(sig, d, inst, env, input);
  if (m.dst != interpret_path(sig, d.target, inst, input, env))
    fail(ErrorCode::TypeMismatch, "interpretation does not end at the target family");
  return m;
}

DescentSample random_descent_sample(const Signature& sig, const FinInstance& inst,
                                    std::size_t max_fiber, std::mt19937_64& rng) {
  const ArrowGen& f = sig.b().arrow(sig.f);
  std::map<Elem, ElemSet> y;
  for (const auto& a : inst.of(f.dst)) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_fiber)(rng);
    for (std::size_t i = 0; i < n; ++i) y[a].push_back("y" + a + "_" + std::to_string(i));
  }
  DescentSample s;
  s.x.over = FiberSym::of(f.src);
  for (const auto& b : inst.of(f.src)) {
    const ElemSet& ya = y[inst.apply(f.name, b)];
    ElemSet xs;
    for (std::size_t i = 0; i < ya.size(); ++i) xs.push_back("x" + b + "_" + std::to_string(i));
    ElemSet perm = xs;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < ya.size(); ++i) {
      s.sigma[b][ya[i]] = perm[i];
      s.sigma_inv[b][perm[i]] = ya[i];
    }
    s.x.fibers[b] = sorted_unique(xs);
  }
  return s;
}

Env descent_env(const Signature& sig, const FinInstance& inst, const DescentSample& s) {
  Env env;
  env.objects[sig.x_name] = s.x;
  auto move = [&s](const Elem& from, const Elem& to, const Elem& x) {
    return s.sigma.at(to).at(s.sigma_inv.at(from).at(x));
  };
  const std::string f1 = sig.f1(), f2 = sig.f2();
  const FinInstance* ip = &inst;
  env.generators["alpha"] = [move](const Elem& b, const Elem& e) {
    auto [b2, x] = untag(e);
    return move(b2, b, x);
  };
  env.generators["phi"] = [move, ip, f1, f2](const Elem& q, const Elem& x) {
    return move(ip->apply(f1, q), ip->apply(f2, q), x);
  };
  env.generators["beta"] = [move, ip, f1](const Elem& b, const Elem& e) {
    auto [q, x] = untag(e);
    return move(ip->apply(f1, q), b, x);
  };
  return env;
}

Family random_family(const FinInstance& inst, const FiberSym& over, std::size_t max_fiber,
                     std::mt19937_64& rng) {
  Family x;
  x.over = over;
  auto fill = [&](const Elem& e) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_fiber)(rng);
    ElemSet v;
    for (std::size_t i = 0; i < n; ++i) v.push_back("z" + e + "_" + std::to_string(i));
    x.fibers[e] = sorted_unique(v);
  };
  if (over.terminal) {
    fill("*");
  } else {
    for (const auto& e : inst.of(over.obj)) fill(e);
  }
  return x;
}

OracleReport oracle_equal(const Signature& sig, const Diagram& d1, const Diagram& d2,
                          std::size_t inst_count, std::size_t max_size, std::uint64_t seed,
                          std::size_t max_fiber) {
  if (d1.source != d2.source || d1.target != d2.target)
    fail(ErrorCode::BoundaryMismatch, "oracle needs parallel diagrams");
  OracleReport r;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < inst_count; ++i) {
    FinInstance inst = random_instance(max_size, rng);
    check_instance(sig.b(), inst);
    DescentSample ds = random_descent_sample(sig, inst, max_fiber, rng);
    Env env = descent_env(sig, inst, ds);
    Family input = d1.source.dom.terminal ? terminal_family()
                                          : random_family(inst, d1.source.dom, max_fiber, rng);
    FamilyMap m1 = interpret_diagram(sig, d1, inst, env, input);
    FamilyMap m2 = interpret_diagram(sig, d2, inst, env, input);
    ++r.samples;
    if (m1 != m2) {
      if (r.mismatches == 0)
        r.message = "sample " + std::to_string(i) + " (|A|=" +
                    std::to_string(inst.of("A").size()) + ", |B|=" +
                    std::to_string(inst.of("B").size()) + ") disagrees";
      ++r.mismatches;
    }
  }
  return r;
}

std::string instance_to_json(const FinInstance& inst) {
  nlohmann::ordered_json j;
  for (const auto& [o, c] : inst.carrier) j["carriers"][o] = c;
  for (const auto& [a, m] : inst.action) {
    nlohmann::ordered_json mj = nlohmann::ordered_json::object();
    for (const auto& [x, y] : m) mj[x] = y;
    j["actions"][a] = mj;
  }
  return j.dump(2);
}

}  // namespace sc
