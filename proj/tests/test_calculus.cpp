#include "doctest.h"
#include "support.hpp"

using namespace sc;
using namespace sc::testing;

namespace {

Signature sig() { return descent_signature(Extension::None); }
Signature sig_dd() { return descent_signature(Extension::DD); }
const BasePresentation& base() { return *builtin_descent_base(); }
Path P(std::vector<std::string> arrows, const std::string& src = "") {
  return base().path(arrows, src);
}
OneCellToken st(const std::string& a) { return OneCellToken::star(a); }
OneCellToken sh(const std::string& a) { return OneCellToken::shriek(a); }
OneCellPath cp(const std::string& dom, std::vector<OneCellToken> t) {
  return make_cell_path(sig(), FiberSym::of(dom), std::move(t));
}

}  // namespace

TEST_CASE("star_lift reverses arrows into star tokens") {
  OneCellPath e = star_lift(base(), P({}, "B"));
  CHECK(e.tokens.empty());
  CHECK(e.dom == FiberSym::of("B"));
  CHECK(e.cod == FiberSym::of("B"));

  OneCellPath d = star_lift(base(), P({"Delta", "f1"}));
  CHECK(d.tokens == std::vector<OneCellToken>{st("f1"), st("Delta")});
  CHECK(d.dom == FiberSym::of("B"));
  CHECK(fiber_at(sig(), d, 1) == FiberSym::of("Q"));
  CHECK(d.cod == FiberSym::of("B"));

  OneCellPath k = star_lift(base(), P({"f1", "f"}));
  CHECK(k.tokens == std::vector<OneCellToken>{st("f"), st("f1")});
  CHECK(k.dom == FiberSym::of("A"));
  CHECK(k.cod == FiberSym::of("Q"));
  CHECK(star_unlift(base(), k) == P({"f1", "f"}));
}

TEST_CASE("shriek_lift keeps arrow order") {
  OneCellPath e = shriek_lift(base(), P({}, "A"));
  CHECK(e.tokens.empty());
  CHECK(e.dom == FiberSym::of("A"));
  OneCellPath f = shriek_lift(base(), P({"f"}));
  CHECK(f.tokens == std::vector<OneCellToken>{sh("f")});
  CHECK(f.dom == FiberSym::of("B"));
  CHECK(f.cod == FiberSym::of("A"));
  OneCellPath p = shriek_lift(base(), P({"pi1", "f2"}));
  CHECK(p.tokens == std::vector<OneCellToken>{sh("pi1"), sh("f2")});
  CHECK(p.dom == FiberSym::of("R"));
  CHECK(fiber_at(sig(), p, 1) == FiberSym::of("Q"));
  CHECK(p.cod == FiberSym::of("B"));
}

TEST_CASE("generator boundaries") {
  auto [es, et] = generator_boundary(sig(), GenTwoCell::eta("f"));
  CHECK(es.tokens.empty());
  CHECK(es.dom == FiberSym::of("B"));
  CHECK(et.tokens == std::vector<OneCellToken>{sh("f"), st("f")});

  auto [bs, bt] = generator_boundary(sig(), GenTwoCell::bcbar("P1"));
  CHECK(bs.tokens == std::vector<OneCellToken>{sh("f"), st("f")});
  CHECK(bt.tokens == std::vector<OneCellToken>{st("f1"), sh("f2")});

  auto [ps, pt] = generator_boundary(sig_dd(), GenTwoCell::descent("phi"));
  CHECK(ps.tokens == std::vector<OneCellToken>{sig_dd().x_token(), st("f1")});
  CHECK(pt.tokens == std::vector<OneCellToken>{sig_dd().x_token(), st("f2")});
  CHECK(ps.dom.terminal);

  CHECK_THROWS_AS(generator_boundary(sig(), GenTwoCell::descent("phi")), Error);
  CHECK_THROWS_AS(generator_boundary(sig(), GenTwoCell::chi(P({"f1"}), P({"f2"}))), Error);
}

TEST_CASE("object generator must be leftmost") {
  Signature s = sig_dd();
  CHECK_NOTHROW(make_cell_path(s, FiberSym::term(), {s.x_token(), st("f1")}));
  CHECK_THROWS_AS(make_cell_path(s, FiberSym::term(), {st("f"), s.x_token()}), Error);
  Diagram d = generator_diagram(s, GenTwoCell::descent("phi"));
  CHECK_NOTHROW(whisker(s, Side::Left, empty_cell_path(FiberSym::term()), d));
}

TEST_CASE("vertical composition") {
  Signature s = sig();
  Diagram a = generator_diagram(s, GenTwoCell::chi(P({"pi", "f1", "f"}), P({"pi2", "f1", "f"})));
  Diagram b = generator_diagram(s, GenTwoCell::chi(P({"pi2", "f1", "f"}), P({"pi2", "f2", "f"})));
  CHECK(vcompose(s, identity_diagram(a.source), a) == a);
  Diagram ab = vcompose(s, a, b);
  CHECK(ab.size() == 2);
  CHECK(ab.source == star_lift(base(), P({"pi", "f1", "f"})));
  CHECK(ab.target == star_lift(base(), P({"pi2", "f2", "f"})));
  Diagram c = generator_diagram(s, GenTwoCell::chi(P({"pi2", "f2", "f"}), P({"pi1", "f1", "f"})));
  CHECK(vcompose(s, vcompose(s, a, b), c) == vcompose(s, a, vcompose(s, b, c)));
  CHECK_THROWS_AS(vcompose(s, a, a), Error);
}

TEST_CASE("horizontal composition and whiskering") {
  Signature s = sig();
  Diagram eta = generator_diagram(s, GenTwoCell::eta("f"));
  OneCellPath p = cp("Q", {st("Delta")});
  Diagram idp = identity_diagram(p);
  Diagram chi = generator_diagram(s, GenTwoCell::chi(P({"Delta", "f1"}), P({"Delta", "f2"})));
  CHECK(hcompose(s, idp, chi) == whisker(s, Side::Left, p, chi));
  CHECK(hcompose(s, chi, identity_diagram(cp("B", {}))) == chi);
  CHECK(whisker(s, Side::Left, empty_cell_path(FiberSym::of("B")), eta) == eta);

  // Both vertical orders of two independent layers canonicalize alike.
  Diagram e1 = generator_diagram(s, GenTwoCell::eta("f"));
  Diagram h = hcompose(s, chi, e1);
  Diagram v1 = vcompose(s, whisker(s, Side::Right, e1.source, chi), whisker(s, Side::Left, chi.target, e1));
  Diagram v2 = vcompose(s, whisker(s, Side::Left, chi.source, e1), whisker(s, Side::Right, e1.target, chi));
  CHECK(h == exchange_canonical(s, v1));
  CHECK(h == exchange_canonical(s, v2));
  CHECK(isotopic(s, v1, v2));

  Diagram w = whisker(s, Side::Right, cp("B", {st("f1")}),
                      generator_diagram(s, GenTwoCell::chi(P({"Delta", "f1"}), P({}, "B"))));
  CHECK(w.layers.size() == 1);
  CHECK(w.layers[0].left.tokens.empty());
  CHECK(w.layers[0].right.tokens == std::vector<OneCellToken>{st("f1")});
}

TEST_CASE("exchange_pair on disjoint layers") {
  Slot u{2, 1, 1, {}}, l{0, 1, 2, {}};
  auto r = exchange_pair(u, l);
  REQUIRE(r.size() == 1);
  CHECK(r[0].first.k == 0);
  CHECK(r[0].second.k == 3);
  Slot u2{0, 1, 2, {}}, l2{3, 1, 1, {}};
  auto r2 = exchange_pair(u2, l2);
  REQUIRE(r2.size() == 1);
  CHECK(r2[0].first.k == 2);
  CHECK(r2[0].second.k == 0);
  // Overlapping layers do not exchange.
  CHECK(exchange_pair(Slot{0, 2, 2, {}}, Slot{1, 2, 2, {}}).empty());
  // A floating cup next to a floating cap exchanges both ways.
  CHECK(exchange_pair(Slot{1, 2, 0, {}}, Slot{1, 0, 2, {}}).size() == 2);
}

TEST_CASE("canonicalization of small diagrams") {
  Signature s = sig();
  Diagram one = generator_diagram(s, GenTwoCell::eta("f"));
  CHECK(exchange_canonical(s, one) == one);
  Diagram empty = identity_diagram(cp("B", {st("f1")}));
  CHECK(exchange_canonical(s, empty) == empty);
}

TEST_CASE("isotopy") {
  Signature s = sig();
  std::mt19937_64 rng(5);
  Diagram d = random_mixed_diagram(s, rng, 4);
  CHECK(isotopic(s, d, d));
  Diagram other = identity_diagram(cp("A", {}));
  CHECK_FALSE(isotopic(s, d, other));
}

TEST_CASE("exchange_canonical agrees with the exchange-class oracle") {
  Signature s = sig();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 150; ++i) {
    Diagram d = random_mixed_diagram(s, rng, 6);
    Diagram c = exchange_canonical(s, d);
    auto cls = exchange_class_oracle(ordering_of(s, d));
    Ordering best = *cls.begin();
    for (const auto& o : cls)
      if (ordering_less(o, best)) best = o;
    CHECK(cls.count(ordering_of(s, c)) == 1);
    CHECK(ordering_of(s, c) == best);
    CHECK(exchange_canonical(s, c) == c);
    CHECK(c.source == d.source);
    CHECK(c.target == d.target);
    std::size_t n = 0;
    for (const auto& o : cls) {
      if (++n > 40) break;
      CHECK(exchange_canonical(s, diagram_of(s, d, o)) == c);
    }
  }
}

TEST_CASE("reorder_layers realizes exchanges and refuses others") {
  Signature s = sig();
  Diagram chi = generator_diagram(s, GenTwoCell::chi(P({"Delta", "f1"}), P({"Delta", "f2"})));
  Diagram d = hcompose(s, chi, generator_diagram(s, GenTwoCell::eta("f")));
  auto r = reorder_layers(s, d, {1, 0});
  REQUIRE(r);
  CHECK(isotopic(s, *r, d));
  CHECK(r->layers[0].gen == d.layers[1].gen);

  Diagram a = generator_diagram(s, GenTwoCell::chi(P({"pi", "f1"}), P({"pi2", "f1"})));
  Diagram b = generator_diagram(s, GenTwoCell::chi(P({"pi2", "f1"}), P({"pi", "f1"})));
  CHECK_FALSE(reorder_layers(s, vcompose(s, a, b), {1, 0}));
}
