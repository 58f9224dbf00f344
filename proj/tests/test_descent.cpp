#include "doctest.h"
#include "support.hpp"

using namespace sc;
using namespace sc::testing;

namespace {

OneCellToken st(const std::string& a) { return OneCellToken::star(a); }
OneCellToken sh(const std::string& a) { return OneCellToken::shriek(a); }

const ProofScript& script(const std::string& name) {
  for (const auto& s : bundled_scripts())
    if (s.name == name) return s;
  FAIL("no script " << name);
  throw;
}

const AxiomEquation& axiom(const Signature& s, const std::string& name) {
  static std::vector<AxiomEquation> keep;
  for (const auto& a : axiom_equations(s))
    if (a.name == name) return keep.emplace_back(a);
  FAIL("no axiom " << name);
  throw;
}

}  // namespace

TEST_CASE("builtin base relations") {
  const BasePresentation& b = *builtin_descent_base();
  CHECK(paths_equal(b, b.path({"f1", "f"}), b.path({"f2", "f"})) == PathEq::Equal);
  CHECK(paths_equal(b, b.path({"pi2", "f2"}), b.path({"pi1", "f1"})) == PathEq::Equal);
  CHECK(paths_equal(b, b.path({"Delta", "f2"}), b.path({}, "B")) == PathEq::Equal);
  CHECK(b.objects().size() == 4);
  CHECK(b.arrows().size() == 7);
}

TEST_CASE("bundled scripts") {
  const auto& all = bundled_scripts();
  REQUIRE(all.size() == 13);
  std::vector<std::string> names;
  for (const auto& s : all) names.push_back(s.name);
  for (const char* n : {"phi_iso_left", "phi_iso_right", "F_DD1", "F_DD2", "G_AC1", "G_AC2",
                        "eta_trans", "mu_trans", "H_TA1", "H_TA2", "roundtrip_HGF",
                        "roundtrip_GFH", "roundtrip_FHG"})
    CHECK(std::count(names.begin(), names.end(), n) == 1);
  auto at = [&](const std::string& n) {
    return std::find(names.begin(), names.end(), n) - names.begin();
  };
  CHECK(at("eta_trans") < at("H_TA1"));
  CHECK(at("mu_trans") < at("H_TA2"));
  for (const auto& s : all) {
    CHECK_NOTHROW(validate_diagram(s.sig, s.lhs));
    CHECK_NOTHROW(validate_diagram(s.sig, s.rhs));
    CHECK(s.lhs.source == s.rhs.source);
    CHECK(s.lhs.target == s.rhs.target);
  }
  const ProofScript& et = script("eta_trans");
  CHECK(et.lhs.source.tokens.empty());
  CHECK(et.lhs.source.dom == FiberSym::of("B"));
  CHECK(et.lhs.target.tokens == std::vector<OneCellToken>{sh("f"), st("f")});
}

TEST_CASE("verify_theorem verifies all thirteen") {
  TheoremReport r = verify_theorem();
  CHECK(r.ok());
  CHECK(r.verified == 13);
  for (const auto& c : r.reports) CHECK_MESSAGE(c.verdict == Verdict::Verified, c.script << ": " << c.reason);
  TheoremReport again = verify_theorem();
  REQUIRE(again.reports.size() == r.reports.size());
  for (std::size_t i = 0; i < r.reports.size(); ++i) {
    CHECK(again.reports[i].script == r.reports[i].script);
    CHECK(again.reports[i].steps_checked == r.reports[i].steps_checked);
  }
}

TEST_CASE("round trips end at the extension generator") {
  for (const auto& [name, ext] : std::vector<std::pair<std::string, Extension>>{
           {"roundtrip_HGF", Extension::TA}, {"roundtrip_GFH", Extension::AC},
           {"roundtrip_FHG", Extension::DD}}) {
    const ProofScript& s = script(name);
    REQUIRE(s.rhs.size() == 1);
    CHECK(s.rhs.layers[0].gen == extension_generator(ext));
    REQUIRE_FALSE(s.steps.empty());
    CHECK(isotopic(s.sig, s.steps.back().result, s.rhs));
  }
}

TEST_CASE("negative controls on the bundle") {
  TheoremOptions no_dd2;
  no_dd2.disabled_axioms = {"DD2"};
  TheoremReport r = verify_theorem(no_dd2);
  CHECK_FALSE(r.ok());
  for (const auto& c : r.reports) {
    if (c.script == "G_AC2") {
      CHECK(c.verdict == Verdict::Failed);
      CHECK(c.failed_step == 6);
      REQUIRE(c.error);
      CHECK(*c.error == ErrorCode::UnprovenDependency);
    } else if (c.script.rfind("roundtrip_", 0) == 0) {
      CHECK(c.verdict == Verdict::Skipped);
    } else {
      CHECK(c.verdict == Verdict::Verified);
    }
  }

  TheoremOptions no_p2;
  no_p2.unmarked_squares = {"P2"};
  TheoremReport r2 = verify_theorem(no_p2);
  CHECK_FALSE(r2.ok());
  bool g_ac2_failed = false;
  for (const auto& c : r2.reports)
    if (c.script == "G_AC2") g_ac2_failed = c.verdict == Verdict::Failed;
  CHECK(g_ac2_failed);
}

TEST_CASE("axiom equations") {
  for (Extension e : {Extension::TA, Extension::DD, Extension::AC}) {
    Signature s = descent_signature(e);
    auto ax = axiom_equations(s);
    CHECK(ax.size() == 2);
    for (const auto& a : ax) {
      CHECK(a.lhs.source == a.rhs.source);
      CHECK(a.lhs.target == a.rhs.target);
      CHECK(a.lhs.source.dom.terminal);
      std::multiset<std::string> g1, g2;
      for (const auto& l : a.lhs.layers) g1.insert(l.gen.str());
      for (const auto& l : exchange_canonical(s, a.lhs).layers) g2.insert(l.gen.str());
      CHECK(g1 == g2);
    }
  }
  Signature ta = descent_signature(Extension::TA);
  const AxiomEquation& ta1 = axiom(ta, "TA1");
  CHECK(ta1.lhs.source.tokens == std::vector<OneCellToken>{ta.x_token()});
  CHECK(ta1.lhs.target.tokens == std::vector<OneCellToken>{ta.x_token()});

  Signature dd = descent_signature(Extension::DD);
  CHECK(axiom(dd, "DD1").lhs.size() == 3);

  Signature ac = descent_signature(Extension::AC);
  const AxiomEquation& ac2 = axiom(ac, "AC2");
  CHECK(ac2.lhs.source.tokens ==
        std::vector<OneCellToken>{ac.x_token(), st("f1"), sh("f2"), st("f1"), sh("f2")});
  CHECK(ac2.lhs.target.tokens == std::vector<OneCellToken>{ac.x_token()});
}

TEST_CASE("translation macro boundaries") {
  auto bound = [](const std::string& m) {
    Signature s = descent_signature(translation_source(m));
    return generator_boundary(s, translation_macro(m));
  };
  Signature s = descent_signature(Extension::TA);
  OneCellToken x = s.x_token();
  auto [fs, ft] = bound("F_phi");
  CHECK(fs.tokens == std::vector<OneCellToken>{x, st("f1")});
  CHECK(ft.tokens == std::vector<OneCellToken>{x, st("f2")});
  auto [hs, ht] = bound("H_alpha");
  CHECK(hs.tokens == std::vector<OneCellToken>{x, sh("f"), st("f")});
  CHECK(ht.tokens == std::vector<OneCellToken>{x});
  auto [gs, gt] = bound("G_beta");
  CHECK(gs.tokens == std::vector<OneCellToken>{x, st("f1"), sh("f2")});
  CHECK(gt.tokens == std::vector<OneCellToken>{x});
  CHECK(translation_source("F_phi") == Extension::TA);
  CHECK(translation_source("G_beta") == Extension::DD);
  CHECK(translation_source("H_alpha") == Extension::AC);
}
