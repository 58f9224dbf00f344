#include "doctest.h"
#include "support.hpp"

using namespace sc;
using namespace sc::testing;

namespace {

Signature sig() { return descent_signature(Extension::None); }
const BasePresentation& base() { return *builtin_descent_base(); }
Path P(std::vector<std::string> arrows, const std::string& src = "") {
  return base().path(arrows, src);
}
GenTwoCell chi(const Path& a, const Path& b) { return GenTwoCell::chi(a, b); }

std::size_t generators(const Diagram& d) { return d.layers.size(); }

}  // namespace

TEST_CASE("R1 on the empty path") {
  RulePair r = instantiate_rule(sig(), "R1", {{"f", "id(B)"}});
  REQUIRE(r.lhs.size() == 1);
  CHECK(r.lhs.layers[0].gen == chi(P({}, "B"), P({}, "B")));
  CHECK(r.lhs.source.tokens.empty());
  CHECK(r.rhs.layers.empty());
  CHECK(r.rhs.source == r.lhs.source);
  CHECK(r.rhs.target == r.lhs.target);
}

TEST_CASE("R2 stacks two chis into one") {
  RulePair r = instantiate_rule(sig(), "R2", {{"f", "pi;f1;f"}, {"g", "pi2;f1;f"}, {"h", "pi1;f1;f"}});
  REQUIRE(r.lhs.size() == 2);
  REQUIRE(r.rhs.size() == 1);
  CHECK(r.rhs.layers[0].gen == chi(P({"pi", "f1", "f"}), P({"pi1", "f1", "f"})));
  CHECK(r.lhs.source == r.rhs.source);
  CHECK(r.lhs.target == r.rhs.target);
}

TEST_CASE("R4.1 is the zig-zag on a shriek strand") {
  RulePair r = instantiate_rule(sig(), "R4.1", {{"h", "f"}});
  REQUIRE(r.lhs.size() == 2);
  CHECK(r.lhs.layers[0].gen == GenTwoCell::eta("f"));
  CHECK(r.lhs.layers[1].gen == GenTwoCell::eps("f"));
  CHECK(r.rhs.layers.empty());
  CHECK(r.lhs.source.tokens == std::vector<OneCellToken>{OneCellToken::shriek("f")});
  CHECK(r.lhs.target == r.lhs.source);
}

TEST_CASE("rule side conditions") {
  CHECK(error_of([] { instantiate_rule(sig(), "R2", {{"f", "f1"}, {"g", "f2"}, {"h", "f1"}}); }) ==
        ErrorCode::SideConditionFailed);
  CHECK(error_of([] { instantiate_rule(sig(), "R2", {{"f", "f1"}}); }) == ErrorCode::InvalidBinding);
  CHECK(error_of([] { instantiate_rule(sig(), "R9", {}); }) == ErrorCode::UnknownName);
  BasePresentation b = base();
  b.unmark_square("P2");
  Signature s = sig();
  s.base = std::make_shared<BasePresentation>(b);
  CHECK(error_of([&] { instantiate_rule(s, "R5.1", {{"P", "P2"}}); }) ==
        ErrorCode::SideConditionFailed);
  CHECK_NOTHROW(instantiate_rule(sig(), "R5.1", {{"P", "P2"}}));
}

TEST_CASE("every rule instance has equal boundaries") {
  Signature s = sig();
  std::mt19937_64 rng(3);
  const auto& arrows = base().arrows();
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto random_path = [&](const std::string& from, std::size_t max_len) {
    std::vector<std::string> names;
    std::string at = from;
    std::size_t len = pick(max_len + 1);
    for (std::size_t i = 0; i < len; ++i) {
      std::vector<std::string> out;
      for (const auto& a : arrows)
        if (a.src == at) out.push_back(a.name);
      if (out.empty()) break;
      names.push_back(out[pick(out.size())]);
      at = base().arrow(names.back()).dst;
    }
    return P(names, from);
  };
  auto random_path_into = [&](const std::string& to, std::size_t max_len) {
    std::vector<std::string> names;
    std::string at = to;
    std::size_t len = pick(max_len + 1);
    for (std::size_t i = 0; i < len; ++i) {
      std::vector<std::string> in;
      for (const auto& a : arrows)
        if (a.dst == at) in.push_back(a.name);
      if (in.empty()) break;
      names.insert(names.begin(), in[pick(in.size())]);
      at = base().arrow(names.front()).src;
    }
    return P(names, at);
  };
  auto text = [](const Path& p) { return path_to_string(p); };
  std::size_t made = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::string& rule = rule_names()[pick(rule_names().size())];
    Path f = random_path(base().objects()[pick(base().objects().size())], 3);
    auto eq = equal_paths(base(), f, 4);
    REQUIRE_FALSE(eq.empty());
    Path g = eq[pick(eq.size())];
    Binding bd{{"f", text(f)}, {"g", text(g)}};
    if (rule == "R2") bd["h"] = text(eq[pick(eq.size())]);
    if (rule == "R3.1") bd["a"] = text(random_path(f.dst, 2));
    if (rule == "R3.2") bd["b"] = text(random_path_into(f.src, 2));
    if (rule == "L1b") {
      bd["r"] = text(random_path_into(f.src, 2));
      bd["l"] = text(random_path(f.dst, 2));
    }
    if (rule == "L1c") {
      Path h = random_path_into(f.src, 2);
      auto heq = equal_paths(base(), h, 3);
      bd["h"] = text(h);
      bd["k"] = text(heq[pick(heq.size())]);
    }
    if (rule == "R4.1" || rule == "R4.2") bd = {{"h", arrows[pick(arrows.size())].name}};
    if (rule == "R5.1" || rule == "R5.2") bd = {{"P", pick(2) ? "P1" : "P2"}};
    RulePair r = instantiate_rule(s, rule, bd);
    CHECK(r.lhs.source == r.rhs.source);
    CHECK(r.lhs.target == r.rhs.target);
    CHECK_NOTHROW(validate_diagram(s, r.lhs));
    CHECK_NOTHROW(validate_diagram(s, r.rhs));
    ++made;
  }
  CHECK(made == 1000);
}

TEST_CASE("rewrite_at and PatternNotFound") {
  Signature s = sig();
  RulePair r2 = instantiate_rule(s, "R2", {{"f", "pi;f1;f"}, {"g", "pi2;f1;f"}, {"h", "pi1;f1;f"}});
  Diagram d = vcompose(s, r2.lhs, generator_diagram(s, chi(P({"pi1", "f1", "f"}), P({"pi", "f2", "f"}))));
  auto pos = find_pattern(s, d, r2.lhs);
  REQUIRE(pos);
  CHECK(pos->first == 0);
  CHECK(pos->count == 2);
  Diagram out = rewrite_at(s, d, r2.lhs, r2.rhs, *pos);
  CHECK(out.size() == 2);
  CHECK(out.source == d.source);
  CHECK(out.target == d.target);
  Position wrong{1, 2, 0};
  CHECK(error_of([&] { rewrite_at(s, d, r2.lhs, r2.rhs, wrong); }) == ErrorCode::PatternNotFound);
  RulePair other = instantiate_rule(s, "R1", {{"f", "f"}});
  CHECK_FALSE(find_pattern(s, d, other.lhs));
}

TEST_CASE("builtin macro expansions") {
  Signature s = sig();
  Diagram bc = expand_macro(s, GenTwoCell::macro("BC", {"P1"}));
  REQUIRE(bc.size() == 3);
  CHECK(bc.layers[0].gen == GenTwoCell::eta("f"));
  CHECK(bc.layers[1].gen.kind == GenKind::Chi);
  CHECK(bc.layers[2].gen == GenTwoCell::eps("f2"));
  CHECK(bc.source.tokens ==
        std::vector<OneCellToken>{OneCellToken::star("f1"), OneCellToken::shriek("f2")});
  CHECK(bc.target.tokens ==
        std::vector<OneCellToken>{OneCellToken::shriek("f"), OneCellToken::star("f")});

  Diagram d1 = expand_macro(s, GenTwoCell::macro("d", {"1"}));
  REQUIRE(d1.size() == 1);
  CHECK(d1.layers[0].gen == chi(P({}, "B"), P({"Delta", "f1"})));
  CHECK(d1.source.tokens.empty());
  CHECK(d1.target.tokens ==
        std::vector<OneCellToken>{OneCellToken::star("f1"), OneCellToken::star("Delta")});

  Diagram mate = expand_macro(s, GenTwoCell::macro("mate", {}, {chi(P({"f1", "f"}), P({"f2", "f"}))}));
  CHECK(isotopic(s, mate, bc));
  CHECK(expand_all(s, generator_diagram(s, GenTwoCell::macro("BC", {"P1"}))) == bc);
}

TEST_CASE("BC and BCbar cancel in both orders") {
  Signature s = sig();
  for (const char* p : {"P1", "P2"}) {
    for (const char* rule : {"R5.1", "R5.2"}) {
      RulePair r = instantiate_rule(s, rule, {{"P", p}});
      ProofScript sc{std::string("cancel_") + p + rule, s, r.lhs, r.rhs, {}, {}};
      ProofStep st;
      st.kind = StepKind::Rule;
      st.name = rule;
      st.binding = {{"P", p}};
      st.pos = {0, 2, 0};
      st.result = r.rhs;
      sc.steps.push_back(st);
      Session session;
      CheckReport rep = check_script(sc, session);
      CHECK_MESSAGE(rep.verdict == Verdict::Verified, rep.reason);
    }
  }
}

TEST_CASE("check_script reports failures") {
  Signature s = sig();
  RulePair r = instantiate_rule(s, "R2", {{"f", "pi;f1;f"}, {"g", "pi2;f1;f"}, {"h", "pi1;f1;f"}});
  ProofStep st;
  st.kind = StepKind::Rule;
  st.name = "R2";
  st.binding = {{"f", "pi;f1;f"}, {"g", "pi2;f1;f"}, {"h", "pi1;f1;f"}};
  st.pos = {0, 2, 0};
  st.result = r.rhs;
  ProofScript good{"good", s, r.lhs, r.rhs, {}, {st}};
  Session session;
  CHECK(check_script(good, session).verdict == Verdict::Verified);

  ProofScript bad = good;
  bad.name = "bad";
  bad.steps[0].result = generator_diagram(s, chi(P({"pi", "f1", "f"}), P({"pi2", "f1", "f"})));
  CheckReport rb = check_script(bad, session);
  CHECK(rb.verdict == Verdict::Failed);
  CHECK(rb.failed_step == 0);

  ProofScript dep = good;
  dep.name = "dep";
  ProofStep prior;
  prior.kind = StepKind::Prior;
  prior.name = "missing";
  prior.pos = {0, 2, 0};
  prior.result = r.rhs;
  dep.steps = {prior};
  CheckReport rd = check_script(dep, session);
  CHECK(rd.verdict == Verdict::Failed);
  REQUIRE(rd.error);
  CHECK(*rd.error == ErrorCode::UnprovenDependency);
}

TEST_CASE("normalize_fib examples") {
  Signature s = sig();
  Diagram two = from_offsets(s, star_lift(base(), P({"pi", "f1"})),
                             {{chi(P({"pi", "f1"}), P({"pi2", "f1"})), 0},
                              {chi(P({"pi2", "f1"}), P({"pi", "f1"})), 0}});
  CHECK(normalize_fib(s, two).layers.empty());
  Diagram three = from_offsets(s, star_lift(base(), P({"pi", "f2"})),
                               {{chi(P({"pi", "f2"}), P({"pi1", "f2"})), 0},
                                {chi(P({"pi1", "f2"}), P({"pi", "f2"})), 0},
                                {chi(P({"pi", "f2"}), P({"pi1", "f2"})), 0}});
  Diagram n = normalize_fib(s, three);
  REQUIRE(n.size() == 1);
  CHECK(n.layers[0].gen == chi(P({"pi", "f2"}), P({"pi1", "f2"})));

  Diagram ff = generator_diagram(s, chi(P({"f1", "f"}), P({"f1", "f"})));
  CHECK(normalize_fib(s, ff) == identity_diagram(ff.source));

  Diagram w = whisker(s, Side::Right, star_lift(base(), P({"pi"})),
                      generator_diagram(s, chi(P({"f1", "f"}), P({"f2", "f"}))));
  Diagram nw = normalize_fib(s, w);
  REQUIRE(nw.size() == 1);
  CHECK(nw.layers[0].gen == chi(P({"pi", "f1", "f"}), P({"pi", "f2", "f"})));
  CHECK(nw.layers[0].left.tokens.empty());
  CHECK(nw.layers[0].right.tokens.empty());

  Diagram empty = generator_diagram(s, chi(P({}, "B"), P({}, "B")));
  CHECK(normalize_fib(s, empty).layers.empty());
  CHECK(normalize_fib(s, empty).source.tokens.empty());

  CHECK(error_of([&] { normalize_fib(s, generator_diagram(s, GenTwoCell::eta("f"))); }) ==
        ErrorCode::NotFibFragment);
}

TEST_CASE("normalize_fib properties on random diagrams") {
  Signature s = sig();
  std::mt19937_64 rng(21);
  for (int i = 0; i < 300; ++i) {
    Diagram d = random_fib_diagram(s, rng, {});
    CHECK(is_pure_chi(d));
    Diagram n = normalize_fib(s, d);
    CHECK(generators(n) <= 1);
    CHECK(n.source == d.source);
    CHECK(n.target == d.target);
    CHECK(normalize_fib(s, n) == n);
    if (d.source == d.target) CHECK(n.layers.empty());
    else CHECK(n.size() == 1);
  }
}

TEST_CASE("decide_fib_equal") {
  Signature s = sig();
  Path f = P({"pi", "f1"}), g = P({"pi2", "f1"});
  Diagram l1a = from_offsets(s, star_lift(base(), f), {{chi(f, g), 0}, {chi(g, f), 0}});
  CHECK(decide_fib_equal(s, l1a, identity_diagram(l1a.source)));
  Diagram ff = generator_diagram(s, chi(f, f));
  CHECK(decide_fib_equal(s, ff, identity_diagram(ff.source)));
  CHECK_FALSE(decide_fib_equal(s, generator_diagram(s, chi(f, g)), generator_diagram(s, chi(g, f))));
  CHECK(error_of([&] { decide_fib_equal(s, generator_diagram(s, GenTwoCell::eta("f")), ff); }) ==
        ErrorCode::NotFibFragment);
}

TEST_CASE("probe on trivial diagrams") {
  Signature s = sig();
  Diagram one = generator_diagram(s, chi(P({"pi", "f1"}), P({"pi2", "f1"})));
  ProbeReport r = probe_diagram(s, one);
  CHECK(r.violations == 0);
  CHECK(oriented_successors(s, one).empty());
  Diagram empty = identity_diagram(empty_cell_path(FiberSym::of("B")));
  CHECK(probe_diagram(s, empty).violations == 0);
  Diagram ff = generator_diagram(s, chi(P({"f1"}), P({"f1"})));
  auto succ = oriented_successors(s, ff);
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].layers.empty());
}

TEST_CASE("probe over small random diagrams") {
  Signature s = sig();
  RandomFibOptions opt;
  opt.max_layers = 3;
  ProbeReport r = confluence_probe(s, opt, 100, 1);
  CHECK(r.samples == 100);
  CHECK(r.violations == 0);
  ProbeHook drop = [s](const Diagram& d) {
    std::vector<Diagram> out;
    if (d.size() >= 2) {
      Diagram r = identity_diagram(d.source);
      for (std::size_t i = 0; i + 1 < d.size(); ++i)
        push_layer(s, r, d.layers[i].gen, d.layers[i].left.size());
      out.push_back(r);
    }
    return out;
  };
  CHECK(confluence_probe(s, opt, 100, 1, drop).violations > 0);
}
