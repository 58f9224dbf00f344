#include "doctest.h"
#include "support.hpp"
#include "strandcheck/render.hpp"
#include "strandcheck/text.hpp"

using namespace sc;
using namespace sc::testing;

namespace {

Signature sig() { return descent_signature(Extension::None); }
const BasePresentation& base() { return *builtin_descent_base(); }

const char* kSmall = R"(# two stacked chis
[base]
object A
object B
object Q
object R
arrow f : B -> A
arrow f1 : Q -> B
arrow f2 : Q -> B
arrow Delta : B -> Q
arrow pi1 : R -> Q
arrow pi2 : R -> Q
arrow pi : R -> Q
relation f1;f = f2;f
relation pi2;f2 = pi1;f1
relation pi;f1 = pi2;f1
relation pi;f2 = pi1;f2
relation Delta;f1 = id(B)
relation Delta;f2 = id(B)
pullback P1 : a=f1 c=f2 d=f b=f
pullback P2 : a=pi2 c=pi1 d=f2 b=f1

[diagram two : f* f1* pi* => f* f1* pi1*]
layer  | chi(pi,f1,f;pi2,f1,f) |
layer  | chi(pi2,f1,f;pi1,f1,f) |

[diagram one : f* f1* pi* => f* f1* pi1*]
layer  | chi(pi,f1,f;pi1,f1,f) |

[script merge]
claim two = one
step rule R2(f=pi;f1;f, g=pi2;f1;f, h=pi1;f1;f) fwd @ layers:0..1, strand:0 -> one
)";

}  // namespace

TEST_CASE("bundle round trip is a fixed point") {
  ScriptFile f = script_file_for(bundled_scripts());
  std::string once = print_script_file(f);
  ScriptFile g = parse_script_file(once);
  std::string twice = print_script_file(g);
  CHECK(once == twice);
  REQUIRE(g.scripts.size() == bundled_scripts().size());
  for (std::size_t i = 0; i < g.scripts.size(); ++i) {
    const ProofScript& a = bundled_scripts()[i];
    const ProofScript& b = g.scripts[i];
    CHECK(a.name == b.name);
    CHECK(a.lhs == b.lhs);
    CHECK(a.rhs == b.rhs);
    CHECK(a.steps.size() == b.steps.size());
    CHECK(a.requires_ == b.requires_);
  }
  Session session;
  auto reps = check_all(g.scripts, session);
  for (const auto& r : reps) CHECK_MESSAGE(r.verdict == Verdict::Verified, r.script << ": " << r.reason);
}

TEST_CASE("hand-written script parses and verifies") {
  ScriptFile f = parse_script_file(kSmall);
  REQUIRE(f.scripts.size() == 1);
  CHECK(f.diagrams.size() == 2);
  Session session;
  CheckReport r = check_script(f.scripts[0], session);
  CHECK_MESSAGE(r.verdict == Verdict::Verified, r.reason);
  CHECK(r.rules_used["R2"] == 1);
  CHECK(print_script_file(parse_script_file(print_script_file(f))) == print_script_file(f));
}

TEST_CASE("corrupted step result fails at that step") {
  std::string text = kSmall;
  text.replace(text.find("-> one"), 6, "-> two");
  ScriptFile f = parse_script_file(text);
  Session session;
  CheckReport r = check_script(f.scripts[0], session);
  CHECK(r.verdict == Verdict::Failed);
  CHECK(r.failed_step == 0);
}

TEST_CASE("parse errors") {
  auto code = [](const std::string& text) {
    return error_of([&] { parse_script_file(text); });
  };
  CHECK(code("[bogus]\n") == ErrorCode::ParseError);
  CHECK(code("[base]\nobject A\narrow f : A -> Z\n").has_value());
  std::string no_claim = kSmall;
  no_claim.replace(no_claim.find("claim two = one"), 15, "claim two = nine");
  CHECK(code(no_claim).has_value());
  std::string bad_layer = kSmall;
  bad_layer.replace(bad_layer.find("layer  | chi(pi,f1,f;pi1,f1,f) |"), 33, "layer  | chi(pi,f1,f;pi1,f1 |");
  CHECK(code(bad_layer).has_value());
}

TEST_CASE("cell path and generator syntax") {
  Signature s = sig();
  OneCellPath p = parse_cell_path(s, "f* f1* pi*");
  CHECK(p == star_lift(base(), base().path({"pi", "f1", "f"})));
  CHECK(parse_cell_path(s, print_cell_path(p)) == p);
  GenTwoCell g = parse_generator(s, "chi(pi,f1;pi2,f1)");
  CHECK(g == GenTwoCell::chi(base().path({"pi", "f1"}), base().path({"pi2", "f1"})));
  CHECK(parse_generator(s, g.str()) == g);
  CHECK(parse_generator(s, "eta(f)") == GenTwoCell::eta("f"));
  CHECK(parse_generator(s, "bcbar(P2)") == GenTwoCell::bcbar("P2"));
}

TEST_CASE("rendering is deterministic") {
  Signature s = sig();
  std::mt19937_64 rng(17);
  for (int i = 0; i < 30; ++i) {
    Diagram d = random_mixed_diagram(s, rng, 5);
    for (RenderFormat fmt : {RenderFormat::Svg, RenderFormat::Tikz}) {
      std::string a, b;
      try {
        a = render(s, d, fmt, "d");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RelationViolated);
        continue;
      }
      b = render(s, d, fmt, "d");
      CHECK(a == b);
    }
  }
}

TEST_CASE("rendering shapes") {
  Signature s = sig();
  std::string id = render(s, identity_diagram(make_cell_path(s, FiberSym::of("B"), {OneCellToken::shriek("f")})),
                          RenderFormat::Svg);
  CHECK(id.find("<svg") == 0);
  CHECK(id.find("<g>") == std::string::npos);
  std::string blank = render(s, identity_diagram(empty_cell_path(FiberSym::of("B"))), RenderFormat::Svg);
  CHECK(blank.find("<path") == std::string::npos);
  std::string eta = render(s, generator_diagram(s, GenTwoCell::eta("f")), RenderFormat::Svg);
  CHECK(eta.find("eta") != std::string::npos);
  std::string tikz = render(s, generator_diagram(s, GenTwoCell::eta("f")), RenderFormat::Tikz);
  CHECK(tikz.find("tikzpicture") != std::string::npos);
  CHECK(fiber_colour(s, FiberSym::of("B")) != fiber_colour(s, FiberSym::of("Q")));
  CHECK(fiber_colour(s, FiberSym::term()) != fiber_colour(s, FiberSym::of("A")));
}

TEST_CASE("bundled diagrams render without collisions") {
  ScriptFile f = script_file_for(bundled_scripts());
  for (const auto& nd : f.diagrams) {
    Signature s = f.signature(nd.extension);
    CHECK_NOTHROW(render(s, nd.diagram, RenderFormat::Svg, nd.name));
    CHECK_NOTHROW(render(s, expand_all(s, nd.diagram), RenderFormat::Tikz, nd.name));
  }
  Signature ta = descent_signature(Extension::TA);
  Diagram fphi = expand_macro(ta, translation_macro("F_phi"));
  CHECK_NOTHROW(render(ta, fphi, RenderFormat::Svg, "F_phi"));
}
