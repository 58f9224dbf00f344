#include "doctest.h"
#include "strandcheck/descent.hpp"

using namespace sc;

namespace {

const BasePresentation& base() { return *builtin_descent_base(); }
Path P(std::vector<std::string> arrows, const std::string& src = "") {
  return base().path(arrows, src);
}

}  // namespace

TEST_CASE("compose_paths is unital and concatenates") {
  CHECK(compose_paths(P({}, "B"), P({"f"})) == P({"f"}));
  CHECK(compose_paths(P({"f1"}), P({"f"})) == P({"f1", "f"}));
  CHECK(compose_paths(P({}, "B"), P({}, "B")) == P({}, "B"));
  CHECK(compose_paths({P({"Delta"}), P({"f1"}), P({"f"})}) == P({"Delta", "f1", "f"}));
}

TEST_CASE("path construction rejects ill-typed input") {
  CHECK_THROWS_AS(P({"f", "f1"}), Error);
  CHECK_THROWS_AS(P({}, "Z"), Error);
  try {
    P({"f", "f1"});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonComposable);
  }
}

TEST_CASE("paths_equal on the descent base") {
  CHECK(paths_equal(base(), P({"f1", "f"}), P({"f2", "f"})) == PathEq::Equal);
  CHECK(paths_equal(base(), P({"Delta", "f1"}), P({}, "B")) == PathEq::Equal);
  CHECK(paths_equal(base(), P({"Delta", "f2"}), P({}, "B")) == PathEq::Equal);
  CHECK(paths_equal(base(), P({"pi", "f1"}), P({"pi2", "f1"})) == PathEq::Equal);
  CHECK(paths_equal(base(), P({"pi2", "f2"}), P({"pi1", "f1"})) == PathEq::Equal);
  CHECK(paths_equal(base(), P({"f1"}), P({"f2"})) == PathEq::NotProvenEqual);
  CHECK_THROWS_AS(paths_equal(base(), P({"f"}), P({"f1"})), Error);
}

TEST_CASE("paths_equal is symmetric and reflexive") {
  std::vector<Path> ps{P({"f1", "f"}), P({"f2", "f"}), P({"pi", "f1", "f"}), P({"pi1", "f2", "f"}),
                       P({"pi2", "f2"}), P({"pi1", "f1"}), P({"f1"}), P({"f2"})};
  for (const auto& p : ps) {
    CHECK(paths_equal(base(), p, p) == PathEq::Equal);
    for (const auto& q : ps)
      if (p.src == q.src && p.dst == q.dst)
        CHECK(paths_equal(base(), p, q) == paths_equal(base(), q, p));
  }
}

TEST_CASE("record_equal extends the proven equalities") {
  BasePresentation b = base();
  b.search_bound = 2;
  Path lhs = P({}, "B");
  Path rhs = P({"Delta", "f1", "Delta", "f2", "Delta", "f1"});
  CHECK(b.cached_equal(lhs, rhs) == PathEq::NotProvenEqual);
  b.record_equal(lhs, rhs);
  CHECK(b.cached_equal(lhs, rhs) == PathEq::Equal);
  CHECK(b.cached_equal(rhs, lhs) == PathEq::Equal);
  CHECK_THROWS_AS(b.record_equal(P({"f"}), P({"f1"})), Error);
}

TEST_CASE("validate_polygon_type") {
  CHECK(validate_polygon_type(base(), {P({"f1", "f"}), P({"f2", "f"})}).ok);
  CHECK(validate_polygon_type(base(), {P({}, "B"), P({}, "B")}).ok);
  auto bad = validate_polygon_type(base(), {P({"f"}), P({"f1"})});
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.error);
  CHECK(*bad.error == ErrorCode::NotParallel);
  auto unproven = validate_polygon_type(base(), {P({"f1"}), P({"f2"})});
  CHECK_FALSE(unproven.ok);
  REQUIRE(unproven.error);
  CHECK(*unproven.error == ErrorCode::ValueEqualityNotProven);
}

TEST_CASE("opposite and pasting of polygon types") {
  PolygonType pt{P({"f1", "f"}), P({"f2", "f"})};
  CHECK(opposite(pt) == PolygonType{P({"f2", "f"}), P({"f1", "f"})});
  PolygonType e{P({}, "B"), P({}, "B")};
  CHECK(opposite(e) == e);
  CHECK(opposite(opposite(pt)) == pt);

  PolygonType fg{P({"pi", "f1"}), P({"pi2", "f1"})};
  PolygonType gh{P({"pi2", "f1"}), P({"pi1", "f2"})};
  CHECK(paste_polygon_types(PasteKind::Vertical, fg, gh) ==
        PolygonType{P({"pi", "f1"}), P({"pi1", "f2"})});
  CHECK(paste_polygon_types(PasteKind::Vertical, pt, opposite(pt)) ==
        PolygonType{P({"f1", "f"}), P({"f1", "f"})});
  PolygonType ff{P({"f"}), P({"f"})};
  CHECK(paste_polygon_types(PasteKind::Vertical, ff, ff) == ff);
  PolygonType d{P({"Delta", "f1"}), P({}, "B")};
  CHECK(paste_polygon_types(PasteKind::Horizontal, d, ff) ==
        PolygonType{P({"Delta", "f1", "f"}), P({"f"})});
  CHECK_THROWS_AS(paste_polygon_types(PasteKind::Vertical, pt, fg), Error);
}

TEST_CASE("builtin descent base validates") {
  CHECK_NOTHROW(base().validate());
  CHECK(base().find_square("P1") != nullptr);
  CHECK(base().find_square("P2") != nullptr);
  BasePresentation b = base();
  CHECK(b.unmark_square("P2"));
  CHECK(b.find_square("P2") == nullptr);
  CHECK_FALSE(b.unmark_square("P2"));
}

TEST_CASE("non-commuting square is rejected") {
  BasePresentation b;
  for (const char* o : {"A", "B", "C", "D"}) b.add_object(o);
  b.add_arrow("a", "A", "B");
  b.add_arrow("c", "A", "C");
  b.add_arrow("d", "B", "D");
  b.add_arrow("b", "C", "D");
  b.add_square({"S", "a", "c", "d", "b"});
  CHECK_THROWS_AS(b.validate(), Error);
  b.add_relation(b.path({"a", "d"}), b.path({"c", "b"}));
  CHECK_NOTHROW(b.validate());
}
