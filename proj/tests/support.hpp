#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "strandcheck/descent.hpp"

namespace sc::testing {

// Random diagram of chi, eta, eps and BCbar layers over the descent base.
inline Diagram random_mixed_diagram(const Signature& sig, std::mt19937_64& rng,
                                    std::size_t max_layers) {
  const BasePresentation& base = sig.b();
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::vector<OneCellToken> toks;
  std::string at = base.objects()[pick(base.objects().size())];
  FiberSym dom = FiberSym::of(at);
  std::size_t len = pick(4);
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<OneCellToken> cand;
    for (const auto& a : base.arrows()) {
      if (a.dst == at) cand.push_back(OneCellToken::star(a.name));
      if (a.src == at) cand.push_back(OneCellToken::shriek(a.name));
    }
    OneCellToken t = cand[pick(cand.size())];
    const ArrowGen& a = base.arrow(t.name);
    at = t.kind == TokKind::Star ? a.src : a.dst;
    toks.push_back(t);
  }
  Diagram d = identity_diagram(make_cell_path(sig, dom, toks));
  std::size_t n = 1 + pick(max_layers);
  for (std::size_t l = 0; l < n; ++l) {
    for (int attempt = 0; attempt < 60; ++attempt) {
      const OneCellPath& cur = d.target;
      std::size_t k = pick(cur.size() + 1);
      GenTwoCell g;
      switch (pick(4)) {
        case 0: g = GenTwoCell::eta(base.arrows()[pick(base.arrows().size())].name); break;
        case 1:
          if (cur.size() < k + 2) continue;
          g = GenTwoCell::eps(cur.tokens[k].name);
          break;
        case 2: g = GenTwoCell::bcbar(pick(2) ? "P1" : "P2"); break;
        default: {
          std::size_t w = std::min<std::size_t>(pick(3), cur.size() - k);
          OneCellPath seg = slice(sig, cur, k, k + w);
          if (seg.dom.terminal || !all_star(seg)) continue;
          Path p = star_unlift(base, seg);
          auto eq = equal_paths(base, p, 3);
          if (eq.empty()) continue;
          g = GenTwoCell::chi(p, eq[pick(eq.size())]);
        }
      }
      try {
        push_layer(sig, d, g, k);
        break;
      } catch (const Error&) {
      }
    }
  }
  return d;
}

// Layer offsets and generator widths, written out independently of Slot.
struct OLayer {
  std::size_t k, s, t;
  std::string gen;
  bool operator<(const OLayer& o) const {
    return std::tie(k, s, t, gen) < std::tie(o.k, o.s, o.t, o.gen);
  }
  bool operator==(const OLayer& o) const {
    return k == o.k && s == o.s && t == o.t && gen == o.gen;
  }
};
using Ordering = std::vector<OLayer>;

inline Ordering ordering_of(const Signature& sig, const Diagram& d) {
  Ordering o;
  for (const auto& l : d.layers) {
    auto [src, tgt] = generator_boundary(sig, l.gen);
    o.push_back({l.left.size(), src.size(), tgt.size(), l.gen.str()});
  }
  return o;
}

// Every layer ordering reachable by swapping adjacent layers that touch
// disjoint strands; when both sides apply, both results are kept.
inline std::set<Ordering> exchange_class_oracle(const Ordering& start) {
  std::set<Ordering> seen{start};
  std::vector<Ordering> todo{start};
  while (!todo.empty()) {
    Ordering cur = todo.back();
    todo.pop_back();
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const OLayer& u = cur[i];
      const OLayer& l = cur[i + 1];
      std::vector<std::pair<OLayer, OLayer>> moves;
      // l lies left of u's output.
      if (l.k + l.s <= u.k) moves.push_back({{l.k, l.s, l.t, l.gen}, {u.k - l.s + l.t, u.s, u.t, u.gen}});
      // l lies right of u's output.
      if (l.k >= u.k + u.t) moves.push_back({{l.k - u.t + u.s, l.s, l.t, l.gen}, {u.k, u.s, u.t, u.gen}});
      for (const auto& [a, b] : moves) {
        Ordering n = cur;
        n[i] = a;
        n[i + 1] = b;
        if (seen.insert(n).second) todo.push_back(n);
      }
    }
  }
  return seen;
}

// Lexicographic key used by the canonical form.
inline bool ordering_less(const Ordering& a, const Ordering& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto ka = std::make_tuple(a[i].k, a[i].s == 0 ? 0 : 1, a[i].gen);
    auto kb = std::make_tuple(b[i].k, b[i].s == 0 ? 0 : 1, b[i].gen);
    if (ka != kb) return ka < kb;
  }
  return false;
}

inline Diagram diagram_of(const Signature& sig, const Diagram& like, const Ordering& o) {
  std::map<std::string, GenTwoCell> gens;
  for (const auto& l : like.layers) gens.emplace(l.gen.str(), l.gen);
  std::vector<std::pair<GenTwoCell, std::size_t>> ls;
  for (const auto& x : o) ls.push_back({gens.at(x.gen), x.k});
  return from_offsets(sig, like.source, ls);
}

}  // namespace sc::testing

namespace sc::testing {

template <class F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace sc::testing
