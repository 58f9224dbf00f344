#include "strandcheck/descent.hpp"

#include <map>

#include "strandcheck/builder.hpp"

namespace sc {

std::shared_ptr<const BasePresentation> builtin_descent_base() {
  static const std::shared_ptr<const BasePresentation> base = [] {
    auto b = std::make_shared<BasePresentation>();
    for (const char* o : {"A", "B", "Q", "R"}) b->add_object(o);
    b->add_arrow("f", "B", "A");
    b->add_arrow("f1", "Q", "B");
    b->add_arrow("f2", "Q", "B");
    b->add_arrow("Delta", "B", "Q");
    b->add_arrow("pi1", "R", "Q");
    b->add_arrow("pi2", "R", "Q");
    b->add_arrow("pi", "R", "Q");
    auto rel = [&](std::vector<std::string> l, std::vector<std::string> r, const std::string& src) {
      b->add_relation(b->path(l, src), b->path(r, src));
    };
    rel({"f1", "f"}, {"f2", "f"}, "Q");
    rel({"pi2", "f2"}, {"pi1", "f1"}, "R");
    rel({"pi", "f1"}, {"pi2", "f1"}, "R");
    rel({"pi", "f2"}, {"pi1", "f2"}, "R");
    rel({"Delta", "f1"}, {}, "B");
    rel({"Delta", "f2"}, {}, "B");
    b->add_square({"P1", "f1", "f2", "f", "f"});
    b->add_square({"P2", "pi2", "pi1", "f2", "f1"});
    b->validate();
    return std::shared_ptr<const BasePresentation>(b);
  }();
  return base;
}

Signature descent_signature(Extension e, std::shared_ptr<const BasePresentation> base) {
  Signature s;
  s.base = base ? std::move(base) : builtin_descent_base();
  s.extension = e;
  return s;
}

GenTwoCell extension_generator(Extension e) {
  switch (e) {
    case Extension::TA: return GenTwoCell::descent("alpha");
    case Extension::DD: return GenTwoCell::descent("phi");
    case Extension::AC: return GenTwoCell::descent("beta");
    case Extension::None: break;
  }
  fail(ErrorCode::InvalidGenerator, "the plain signature has no descent generator");
}

Extension translation_source(const std::string& name) {
  if (name == "F_phi" || name == "F_psi") return Extension::TA;
  if (name == "G_beta") return Extension::DD;
  if (name == "H_alpha") return Extension::AC;
  fail(ErrorCode::UnknownName, "unknown translation " + name);
}

GenTwoCell translation_macro(const std::string& name) {
  return GenTwoCell::macro(name, {}, {extension_generator(translation_source(name))});
}

std::vector<AxiomEquation> axiom_equations(const Signature& sig) {
  std::vector<AxiomEquation> out;
  if (sig.extension == Extension::None) return out;
  const BasePresentation& b = sig.b();
  const std::string f = sig.f, f1 = sig.f1(), f2 = sig.f2();
  const std::string bobj = b.arrow(f).src;
  OneCellToken x = sig.x_token();
  auto cell = [&](std::vector<OneCellToken> toks) {
    return make_cell_path(sig, FiberSym::term(), std::move(toks));
  };
  auto star = [](const std::string& a) { return OneCellToken::star(a); };
  auto shriek = [](const std::string& a) { return OneCellToken::shriek(a); };
  auto chi = [&](std::vector<std::string> t, std::vector<std::string> u) {
    return GenTwoCell::chi(b.path(t, bobj), b.path(u, bobj));
  };
  auto build = [&](const OneCellPath& src, const LayerSpec& ls) {
    Diagram d = identity_diagram(src);
    for (const auto& [g, k] : ls) push_expanded(sig, d, g, k);
    return d;
  };
  GenTwoCell gen = extension_generator(sig.extension);
  switch (sig.extension) {
    case Extension::TA: {
      OneCellPath s1 = cell({x});
      out.push_back({"TA1", build(s1, {{GenTwoCell::eta(f), 1}, {gen, 0}}), identity_diagram(s1)});
      OneCellPath s2 = cell({x, shriek(f), star(f), shriek(f), star(f)});
      out.push_back({"TA2", build(s2, {{GenTwoCell::eps(f), 2}, {gen, 0}}),
                     build(s2, {{gen, 0}, {gen, 0}})});
      break;
    }
    case Extension::DD: {
      OneCellPath s1 = cell({x});
      out.push_back({"DD1",
                     build(s1, {{chi({}, {"Delta", f1}), 1}, {gen, 0}, {chi({"Delta", f2}, {}), 1}}),
                     identity_diagram(s1)});
      OneCellPath s2 = cell({x, star(f1), star("pi2")});
      GenTwoCell j = GenTwoCell::chi(b.path({"pi2", f2}), b.path({"pi1", f1}));
      GenTwoCell j1inv = GenTwoCell::chi(b.path({"pi2", f1}), b.path({"pi", f1}));
      GenTwoCell j2 = GenTwoCell::chi(b.path({"pi", f2}), b.path({"pi1", f2}));
      out.push_back({"DD2", build(s2, {{gen, 0}, {j, 1}, {gen, 0}}),
                     build(s2, {{j1inv, 1}, {gen, 0}, {j2, 1}})});
      break;
    }
    case Extension::AC: {
      OneCellPath s1 = cell({x});
      out.push_back({"AC1", build(s1, {{GenTwoCell::macro("eta_prime"), 1}, {gen, 0}}),
                     identity_diagram(s1)});
      OneCellPath s2 = cell({x, star(f1), shriek(f2), star(f1), shriek(f2)});
      out.push_back({"AC2", build(s2, {{GenTwoCell::macro("mu_prime"), 1}, {gen, 0}}),
                     build(s2, {{gen, 0}, {gen, 0}})});
      break;
    }
    case Extension::None: break;
  }
  return out;
}

namespace {

struct Kit {
  Signature sig;
  const BasePresentation& b;
  std::string bobj;

  explicit Kit(Extension e) : sig(descent_signature(e)), b(sig.b()), bobj(b.arrow("f").src) {}

  OneCellPath cell(std::vector<OneCellToken> toks, bool with_x) const {
    if (with_x) toks.insert(toks.begin(), sig.x_token());
    if (toks.empty()) return empty_cell_path(FiberSym::of(bobj));
    return make_cell_path(sig, with_x ? FiberSym::term() : token_dom(sig, toks.front()), toks);
  }
  Diagram dia(const OneCellPath& src, const LayerSpec& ls) const {
    return from_offsets(sig, src, ls);
  }
  GenTwoCell chi(std::vector<std::string> t, std::vector<std::string> u) const {
    Path top = t.empty() ? b.empty_path(bobj) : b.path(t);
    Path bot = u.empty() ? b.empty_path(bobj) : b.path(u);
    return GenTwoCell::chi(top, bot);
  }
};

OneCellToken st(const std::string& a) { return OneCellToken::star(a); }
OneCellToken sh(const std::string& a) { return OneCellToken::shriek(a); }
GenTwoCell eta(const std::string& a) { return GenTwoCell::eta(a); }
GenTwoCell eps(const std::string& a) { return GenTwoCell::eps(a); }
GenTwoCell bcbar(const std::string& p) { return GenTwoCell::bcbar(p); }
GenTwoCell mac(const std::string& n, std::vector<std::string> ps = {},
               std::vector<GenTwoCell> as = {}) {
  return GenTwoCell::macro(n, std::move(ps), std::move(as));
}
Position at(std::size_t first, std::size_t count, std::size_t strand) {
  return {first, count, strand};
}

const Direction fwd = Direction::Fwd;
const Direction bwd = Direction::Bwd;

ProofScript phi_iso(bool left) {
  Kit k(Extension::TA);
  GenTwoCell alpha = GenTwoCell::descent("alpha");
  GenTwoCell first = mac(left ? "F_phi" : "F_psi", {}, {alpha});
  GenTwoCell second = mac(left ? "F_psi" : "F_phi", {}, {alpha});
  GenTwoCell c1 = left ? k.chi({"f1", "f"}, {"f2", "f"}) : k.chi({"f2", "f"}, {"f1", "f"});
  GenTwoCell c2 = left ? k.chi({"f2", "f"}, {"f1", "f"}) : k.chi({"f1", "f"}, {"f2", "f"});
  OneCellPath src = k.cell({st(left ? "f1" : "f2")}, true);
  ScriptBuilder sb(k.sig, left ? "phi_iso_left" : "phi_iso_right",
                   k.dia(src, {{first, 0}, {second, 0}}), identity_diagram(src));
  sb.unfold(first)
      .unfold(second)
      .arrange({{eta("f"), 1}, {c1, 2}, {eta("f"), 3}, {c2, 4}, {alpha, 0}, {alpha, 0}})
      .axiom("TA2", bwd)
      .arrange({{eta("f"), 1}, {c1, 2}, {eta("f"), 3}, {eps("f"), 2}, {c2, 2}, {alpha, 0}})
      .rule("R4.2", {{"h", "f"}})
      .rule("L1a", {{"f", left ? "f1;f" : "f2;f"}, {"g", left ? "f2;f" : "f1;f"}})
      .axiom("TA1");
  return sb.build();
}

ProofScript f_dd1() {
  Kit k(Extension::TA);
  GenTwoCell F = translation_macro("F_phi");
  GenTwoCell alpha = GenTwoCell::descent("alpha");
  GenTwoCell d1 = k.chi({}, {"Delta", "f1"});
  GenTwoCell d2inv = k.chi({"Delta", "f2"}, {});
  GenTwoCell c12 = k.chi({"f1", "f"}, {"f2", "f"});
  OneCellPath src = k.cell({}, true);
  ScriptBuilder sb(k.sig, "F_DD1", k.dia(src, {{d1, 1}, {F, 0}, {d2inv, 1}}),
                   identity_diagram(src));
  sb.unfold(F)
      .arrange({{eta("f"), 1}, {d1, 3}, {c12, 2}, {d2inv, 3}, {alpha, 0}})
      .coherence(1, 3, {})
      .axiom("TA1");
  return sb.build();
}

ProofScript f_dd2() {
  Kit k(Extension::TA);
  GenTwoCell F = translation_macro("F_phi");
  GenTwoCell alpha = GenTwoCell::descent("alpha");
  GenTwoCell c12 = k.chi({"f1", "f"}, {"f2", "f"});
  GenTwoCell j = k.chi({"pi2", "f2"}, {"pi1", "f1"});
  GenTwoCell j1inv = k.chi({"pi2", "f1"}, {"pi", "f1"});
  GenTwoCell j2 = k.chi({"pi", "f2"}, {"pi1", "f2"});
  OneCellPath src = k.cell({st("f1"), st("pi2")}, true);
  ScriptBuilder sb(k.sig, "F_DD2", k.dia(src, {{F, 0}, {j, 1}, {F, 0}}),
                   k.dia(src, {{j1inv, 1}, {F, 0}, {j2, 1}}));
  sb.unfold(F, at(0, 1, 0))
      .unfold(F, at(4, 1, 0))
      .arrange({{eta("f"), 1}, {c12, 2}, {j, 3}, {eta("f"), 3}, {c12, 4}, {alpha, 0}, {alpha, 0}})
      .axiom("TA2", bwd)
      .arrange({{eta("f"), 1}, {c12, 2}, {j, 3}, {eta("f"), 3}, {eps("f"), 2}, {c12, 2}, {alpha, 0}})
      .rule("R4.2", {{"h", "f"}})
      .coherence(1, 3, {{j1inv, 3}, {c12, 2}, {j2, 3}})
      .arrange({{j1inv, 1}, {eta("f"), 1}, {c12, 2}, {alpha, 0}, {j2, 1}})
      .fold(F);
  return sb.build();
}

ProofScript g_ac1() {
  Kit k(Extension::DD);
  GenTwoCell G = translation_macro("G_beta");
  GenTwoCell phi = GenTwoCell::descent("phi");
  GenTwoCell ep = mac("eta_prime");
  GenTwoCell d1 = k.chi({}, {"Delta", "f1"});
  GenTwoCell d2inv = k.chi({"Delta", "f2"}, {});
  OneCellPath src = k.cell({}, true);
  ScriptBuilder sb(k.sig, "G_AC1", k.dia(src, {{ep, 1}, {G, 0}}), identity_diagram(src));
  sb.unfold(ep)
      .unfold(G)
      .arrange({{d1, 1}, {phi, 0}, {eta("f2"), 2}, {eps("f2"), 1}, {d2inv, 1}})
      .rule("R4.2", {{"h", "f2"}})
      .axiom("DD1");
  return sb.build();
}

ProofScript g_ac2() {
  Kit k(Extension::DD);
  GenTwoCell G = translation_macro("G_beta");
  GenTwoCell phi = GenTwoCell::descent("phi");
  GenTwoCell mp = mac("mu_prime");
  GenTwoCell j = k.chi({"pi2", "f2"}, {"pi1", "f1"});
  GenTwoCell j1inv = k.chi({"pi2", "f1"}, {"pi", "f1"});
  GenTwoCell j2 = k.chi({"pi", "f2"}, {"pi1", "f2"});
  OneCellPath src = k.cell({st("f1"), sh("f2"), st("f1"), sh("f2")}, true);
  ScriptBuilder sb(k.sig, "G_AC2", k.dia(src, {{mp, 1}, {G, 0}}), k.dia(src, {{G, 0}, {G, 0}}));
  sb.unfold(mp)
      .unfold(G)
      .arrange({{bcbar("P2"), 2}, {j1inv, 1}, {eta("pi"), 3}, {eps("pi"), 2}, {eta("f2"), 2},
                {j2, 3}, {eps("pi1"), 4}, {eps("f2"), 3}, {phi, 0}, {eps("f2"), 1}})
      .rule("R4.2", {{"h", "pi"}})
      .arrange({{bcbar("P2"), 2}, {j1inv, 1}, {phi, 0}, {eta("f2"), 2}, {eps("f2"), 1}, {j2, 1},
                {eps("pi1"), 2}, {eps("f2"), 1}})
      .rule("R4.2", {{"h", "f2"}})
      .axiom("DD2", bwd)
      .rule("R4.2", {{"h", "f2"}}, bwd, at(2, 0, 1))
      .arrange({{bcbar("P2"), 2}, {eta("f2"), 2}, {j, 3}, {eps("pi1"), 4}, {phi, 0},
                {eps("f2"), 1}, {phi, 0}, {eps("f2"), 1}})
      .fold(mac("BC", {"P2"}))
      .fold(G)
      .fold(G)
      .rule("R5.2", {{"P", "P2"}});
  return sb.build();
}

ProofScript eta_trans() {
  Kit k(Extension::None);
  GenTwoCell ep = mac("eta_prime");
  GenTwoCell bc1 = mac("BC", {"P1"});
  GenTwoCell d1 = k.chi({}, {"Delta", "f1"});
  GenTwoCell d2inv = k.chi({"Delta", "f2"}, {});
  GenTwoCell c12 = k.chi({"f1", "f"}, {"f2", "f"});
  OneCellPath src = k.cell({}, false);
  ScriptBuilder sb(k.sig, "eta_trans", k.dia(src, {{ep, 0}, {bc1, 0}}),
                   k.dia(src, {{eta("f"), 0}}));
  sb.unfold(ep)
      .unfold(bc1)
      .arrange({{eta("f"), 0}, {d1, 2}, {c12, 1}, {eta("f2"), 3}, {eps("f2"), 2}, {d2inv, 2}})
      .rule("R4.2", {{"h", "f2"}})
      .coherence(1, 3, {});
  return sb.build();
}

ProofScript mu_trans() {
  Kit k(Extension::None);
  GenTwoCell mp = mac("mu_prime");
  GenTwoCell mu = mac("mu");
  GenTwoCell bc1 = mac("BC", {"P1"});
  GenTwoCell bc2 = mac("BC", {"P2"});
  GenTwoCell b1 = bcbar("P1"), b2 = bcbar("P2");
  GenTwoCell c12 = k.chi({"f1", "f"}, {"f2", "f"});
  GenTwoCell j = k.chi({"pi2", "f2"}, {"pi1", "f1"});
  GenTwoCell j1inv = k.chi({"pi2", "f1"}, {"pi", "f1"});
  GenTwoCell j2 = k.chi({"pi", "f2"}, {"pi1", "f2"});
  OneCellPath src = k.cell({sh("f"), st("f"), sh("f"), st("f")}, false);
  ScriptBuilder sb(k.sig, "mu_trans", k.dia(src, {{b1, 0}, {b1, 2}, {mp, 0}}),
                   k.dia(src, {{mu, 0}, {b1, 0}}));
  sb.rule("R5.1", {{"P", "P1"}}, bwd, at(3, 0, 0))
      .unfold(mp)
      .unfold(bc1)
      .arrange({{b1, 0}, {b1, 2}, {b2, 1}, {j1inv, 0}, {eta("pi"), 2}, {eps("pi"), 1},
                {eta("f2"), 1}, {j2, 2}, {eps("pi1"), 3}, {eps("f2"), 2}, {eta("f"), 0},
                {c12, 1}, {eps("f2"), 2}, {b1, 0}})
      .rule("R4.2", {{"h", "pi"}})
      .arrange({{b1, 0}, {b1, 2}, {b2, 1}, {j1inv, 0}, {eta("f"), 0}, {c12, 1}, {eta("f2"), 3},
                {eps("f2"), 2}, {j2, 2}, {eps("pi1"), 3}, {eps("f2"), 2}, {b1, 0}})
      .rule("R4.2", {{"h", "f2"}})
      .arrange({{b1, 0}, {b1, 2}, {b2, 1}, {eta("f"), 0}, {j1inv, 2}, {c12, 1}, {j2, 2},
                {eps("pi1"), 3}, {eps("f2"), 2}, {b1, 0}})
      .coherence(4, 3, {{c12, 1}, {j, 2}, {c12, 1}})
      .rule("R4.2", {{"h", "f2"}}, bwd, at(5, 0, 2))
      .rule("R4.2", {{"h", "f"}}, bwd, at(8, 0, 1))
      .arrange({{b1, 0}, {b1, 2}, {b2, 1}, {eta("f2"), 1}, {j, 2}, {eps("pi1"), 3},
                {eta("f"), 0}, {c12, 1}, {eps("f2"), 2}, {eta("f"), 2}, {c12, 3}, {eps("f2"), 4},
                {eps("f"), 1}, {b1, 0}})
      .fold(bc2)
      .fold(bc1)
      .fold(bc1)
      .fold(mu)
      .rule("R5.2", {{"P", "P2"}})
      .arrange({{b1, 0}, {bc1, 0}, {b1, 2}, {bc1, 2}, {mu, 0}, {b1, 0}})
      .rule("R5.2", {{"P", "P1"}})
      .rule("R5.2", {{"P", "P1"}});
  return sb.build();
}

ProofScript h_ta1(const ProofScript& eta_tr) {
  Kit k(Extension::AC);
  GenTwoCell H = translation_macro("H_alpha");
  GenTwoCell beta = GenTwoCell::descent("beta");
  OneCellPath src = k.cell({}, true);
  ScriptBuilder sb(k.sig, "H_TA1", k.dia(src, {{eta("f"), 1}, {H, 0}}), identity_diagram(src));
  sb.unfold(H)
      .prior(eta_tr, bwd)
      .rule("R5.1", {{"P", "P1"}})
      .unfold(mac("eta_prime"))
      .axiom("AC1");
  (void)beta;
  return sb.build();
}

ProofScript h_ta2(const ProofScript& mu_tr) {
  Kit k(Extension::AC);
  GenTwoCell H = translation_macro("H_alpha");
  GenTwoCell beta = GenTwoCell::descent("beta");
  GenTwoCell mu = mac("mu");
  GenTwoCell b1 = bcbar("P1");
  OneCellPath src = k.cell({sh("f"), st("f"), sh("f"), st("f")}, true);
  ScriptBuilder sb(k.sig, "H_TA2", k.dia(src, {{mu, 1}, {H, 0}}), k.dia(src, {{H, 0}, {H, 0}}));
  sb.unfold(H)
      .prior(mu_tr, bwd)
      .unfold(mac("mu_prime"))
      .axiom("AC2")
      .arrange({{b1, 1}, {beta, 0}, {b1, 1}, {beta, 0}})
      .fold(H)
      .fold(H);
  return sb.build();
}

const std::vector<std::string> kTranslationScripts{"F_DD1", "F_DD2", "G_AC1",
                                                   "G_AC2", "H_TA1", "H_TA2"};

ProofScript roundtrip_hgf() {
  Kit k(Extension::TA);
  GenTwoCell alpha = GenTwoCell::descent("alpha");
  GenTwoCell hgf = mac("H_alpha", {}, {mac("G_beta", {}, {mac("F_phi", {}, {alpha})})});
  GenTwoCell c12 = k.chi({"f1", "f"}, {"f2", "f"});
  OneCellPath src = k.cell({sh("f"), st("f")}, true);
  ScriptBuilder sb(k.sig, "roundtrip_HGF", k.dia(src, {{hgf, 0}}), k.dia(src, {{alpha, 0}}));
  for (const auto& n : kTranslationScripts) sb.require(n);
  sb.unfold(hgf)
      .arrange({{bcbar("P1"), 1}, {eta("f"), 1}, {c12, 2}, {eps("f2"), 3}, {alpha, 0}})
      .fold(mac("BC", {"P1"}))
      .rule("R5.2", {{"P", "P1"}});
  return sb.build();
}

ProofScript roundtrip_gfh() {
  Kit k(Extension::AC);
  GenTwoCell beta = GenTwoCell::descent("beta");
  GenTwoCell gfh = mac("G_beta", {}, {mac("F_phi", {}, {mac("H_alpha", {}, {beta})})});
  GenTwoCell c12 = k.chi({"f1", "f"}, {"f2", "f"});
  OneCellPath src = k.cell({st("f1"), sh("f2")}, true);
  ScriptBuilder sb(k.sig, "roundtrip_GFH", k.dia(src, {{gfh, 0}}), k.dia(src, {{beta, 0}}));
  for (const auto& n : kTranslationScripts) sb.require(n);
  sb.unfold(gfh)
      .arrange({{eta("f"), 1}, {c12, 2}, {eps("f2"), 3}, {bcbar("P1"), 1}, {beta, 0}})
      .fold(mac("BC", {"P1"}))
      .rule("R5.1", {{"P", "P1"}});
  return sb.build();
}

ProofScript roundtrip_fhg() {
  Kit k(Extension::DD);
  GenTwoCell phi = GenTwoCell::descent("phi");
  GenTwoCell fhg = mac("F_phi", {}, {mac("H_alpha", {}, {mac("G_beta", {}, {phi})})});
  GenTwoCell c12 = k.chi({"f1", "f"}, {"f2", "f"});
  OneCellPath src = k.cell({st("f1")}, true);
  ScriptBuilder sb(k.sig, "roundtrip_FHG", k.dia(src, {{fhg, 0}}), k.dia(src, {{phi, 0}}));
  for (const auto& n : kTranslationScripts) sb.require(n);
  sb.unfold(fhg)
      .rule("R4.2", {{"h", "f2"}}, bwd, at(2, 0, 3))
      .arrange({{eta("f2"), 2}, {eta("f"), 1}, {c12, 2}, {eps("f2"), 3}, {bcbar("P1"), 1},
                {phi, 0}, {eps("f2"), 1}})
      .fold(mac("BC", {"P1"}))
      .rule("R5.1", {{"P", "P1"}})
      .arrange({{phi, 0}, {eta("f2"), 2}, {eps("f2"), 1}})
      .rule("R4.2", {{"h", "f2"}});
  return sb.build();
}

}  // namespace

const std::vector<ProofScript>& bundled_scripts() {
  static const std::vector<ProofScript> scripts = [] {
    std::vector<ProofScript> v;
    v.push_back(phi_iso(true));
    v.push_back(phi_iso(false));
    v.push_back(f_dd1());
    v.push_back(f_dd2());
    v.push_back(g_ac1());
    v.push_back(g_ac2());
    v.push_back(eta_trans());
    v.push_back(mu_trans());
    v.push_back(h_ta1(v[6]));
    v.push_back(h_ta2(v[7]));
    v.push_back(roundtrip_hgf());
    v.push_back(roundtrip_gfh());
    v.push_back(roundtrip_fhg());
    return v;
  }();
  return scripts;
}

std::vector<ProofScript> rebase_scripts(const std::vector<ProofScript>& scripts,
                                        std::shared_ptr<const BasePresentation> base) {
  std::vector<ProofScript> out = scripts;
  for (auto& s : out) s.sig.base = base;
  return out;
}

TheoremReport verify_scripts(const std::vector<ProofScript>& scripts, const TheoremOptions& opt) {
  std::vector<ProofScript> work = scripts;
  if (!opt.unmarked_squares.empty()) {
    std::map<const BasePresentation*, std::shared_ptr<const BasePresentation>> rebased;
    for (auto& s : work) {
      auto& slot = rebased[s.sig.base.get()];
      if (!slot) {
        auto copy = std::make_shared<BasePresentation>(*s.sig.base);
        for (const auto& sq : opt.unmarked_squares) copy->unmark_square(sq);
        slot = copy;
      }
      s.sig.base = slot;
    }
  }
  Session session;
  session.disabled_axioms = opt.disabled_axioms;
  TheoremReport rep;
  rep.reports = check_all(work, session);
  for (const auto& r : rep.reports)
    if (r.verdict == Verdict::Verified) rep.verified++;
  return rep;
}

TheoremReport verify_theorem(const TheoremOptions& opt) {
  return verify_scripts(bundled_scripts(), opt);
}

}  // namespace sc
