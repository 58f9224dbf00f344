#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <tuple>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "strandcheck/rewrite.hpp"

namespace sc {

bool is_pure_chi(const Diagram& d) {
  return std::all_of(d.layers.begin(), d.layers.end(),
                     [](const Layer& l) { return l.gen.kind == GenKind::Chi; });
}

namespace {

void require_fib(const Diagram& d) {
  for (const auto& l : d.layers)
    if (l.gen.kind != GenKind::Chi)
      fail(ErrorCode::NotFibFragment, "generator " + l.gen.str() + " is not a chi");
}

bool is_star(const OneCellToken& t) { return t.kind == TokKind::Star; }

}  // namespace

Diagram normalize_fib(const Signature& sig, const Diagram& d) {
  require_fib(d);
  validate_diagram(sig, d);
  const OneCellPath& src = d.source;
  const OneCellPath& tgt = d.target;
  Diagram r = identity_diagram(src);
  std::size_t i = 0, j = 0;
  while (true) {
    std::size_t i1 = i, j1 = j;
    while (i1 < src.size() && is_star(src.tokens[i1])) ++i1;
    while (j1 < tgt.size() && is_star(tgt.tokens[j1])) ++j1;
    OneCellPath ss = slice(sig, src, i, i1), ts = slice(sig, tgt, j, j1);
    if (ss.tokens != ts.tokens) {
      // d pastes valid chis inside this segment, so its ends are equal paths.
      Path top = star_unlift(sig.b(), ss), bot = star_unlift(sig.b(), ts);
      sig.b().record_equal(top, bot);
      push_layer(sig, r, GenTwoCell::chi(top, bot), j);
    }
    if (i1 >= src.size() || j1 >= tgt.size()) {
      if (i1 < src.size() || j1 < tgt.size())
        fail(ErrorCode::BoundaryMismatch, "non-pullback strands differ across the diagram");
      break;
    }
    if (src.tokens[i1] != tgt.tokens[j1])
      fail(ErrorCode::BoundaryMismatch, "non-pullback strands differ across the diagram");
    i = i1 + 1;
    j = j1 + 1;
  }
  if (r.target != d.target) fail(ErrorCode::BoundaryChanged, "normalization changed the target");
  return r;
}

bool decide_fib_equal(const Signature& sig, const Diagram& d1, const Diagram& d2) {
  require_fib(d1);
  require_fib(d2);
  bool same = d1.source == d2.source && d1.target == d2.target;
#ifndef NDEBUG
  if (same != (normalize_fib(sig, d1) == normalize_fib(sig, d2)))
    fail(ErrorCode::ResultMismatch, "normal forms disagree with the boundary test");
#else
  (void)sig;
#endif
  return same;
}

namespace {

using Word = std::vector<std::string>;

void word_neighbours(const BasePresentation& base, const std::string& src, const Word& w,
                     std::vector<Word>& out) {
  std::vector<std::string> objs(w.size() + 1);
  objs[0] = src;
  for (std::size_t i = 0; i < w.size(); ++i) objs[i + 1] = base.arrow(w[i]).dst;
  for (const auto& rel : base.relations()) {
    for (int dir = 0; dir < 2; ++dir) {
      const Path& from = dir == 0 ? rel.lhs : rel.rhs;
      const Path& to = dir == 0 ? rel.rhs : rel.lhs;
      std::size_t n = from.arrows.size();
      for (std::size_t i = 0; i + n <= w.size(); ++i) {
        if (objs[i] != from.src) continue;
        if (!std::equal(from.arrows.begin(), from.arrows.end(), w.begin() + i)) continue;
        Word nw(w.begin(), w.begin() + i);
        nw.insert(nw.end(), to.arrows.begin(), to.arrows.end());
        nw.insert(nw.end(), w.begin() + i + n, w.end());
        out.push_back(std::move(nw));
      }
    }
  }
}

std::string word_key(const std::string& src, const Word& w) {
  std::string k = src + "|";
  for (const auto& a : w) k += a + ",";
  return k;
}

}  // namespace

std::vector<Path> equal_paths(const BasePresentation& base, const Path& p, std::size_t max_len) {
  static std::mutex mu;
  static std::unordered_map<std::string, std::vector<Path>> cache;
  std::string ck = word_key(p.src, p.arrows) + "#" + std::to_string(max_len) + "#" +
                   std::to_string(base.search_bound) + "#" +
                   std::to_string(reinterpret_cast<std::uintptr_t>(&base));
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(ck);
    if (it != cache.end()) return it->second;
  }
  std::vector<Path> out;
  std::unordered_set<std::string> seen{word_key(p.src, p.arrows)};
  std::vector<Word> frontier{p.arrows};
  if (p.arrows.size() <= max_len) out.push_back(p);
  std::vector<Word> nb;
  for (int depth = 0; depth < base.search_bound && !frontier.empty(); ++depth) {
    std::vector<Word> next;
    for (const auto& w : frontier) {
      nb.clear();
      word_neighbours(base, p.src, w, nb);
      for (auto& v : nb) {
        if (v.size() > max_len + 2) continue;
        if (!seen.insert(word_key(p.src, v)).second) continue;
        if (v.size() <= max_len) out.push_back(Path{p.src, p.dst, v});
        next.push_back(std::move(v));
      }
    }
    frontier = std::move(next);
  }
  std::lock_guard<std::mutex> lock(mu);
  cache[ck] = out;
  return out;
}

Diagram random_fib_from(const Signature& sig, const OneCellPath& source, std::mt19937_64& rng,
                        const RandomFibOptions& opt) {
  const BasePresentation& base = sig.b();
  Diagram d = identity_diagram(source);
  std::size_t n = std::uniform_int_distribution<std::size_t>(0, opt.max_layers)(rng);
  for (std::size_t l = 0; l < n; ++l) {
    for (int attempt = 0; attempt < 20; ++attempt) {
      const OneCellPath& cur = d.target;
      std::size_t i = std::uniform_int_distribution<std::size_t>(0, cur.size())(rng);
      std::size_t w = std::uniform_int_distribution<std::size_t>(
          0, std::min(opt.max_path_len, cur.size() - i))(rng);
      OneCellPath seg = slice(sig, cur, i, i + w);
      if (seg.dom.terminal || !all_star(seg)) continue;
      Path p = star_unlift(base, seg);
      auto eq = equal_paths(base, p, opt.max_path_len);
      if (eq.empty()) continue;
      const Path& q = eq[std::uniform_int_distribution<std::size_t>(0, eq.size() - 1)(rng)];
      push_layer(sig, d, GenTwoCell::chi(p, q), i);
      break;
    }
  }
  return d;
}

Diagram random_fib_diagram(const Signature& sig, std::mt19937_64& rng,
                           const RandomFibOptions& opt) {
  const BasePresentation& base = sig.b();
  const auto& objs = base.objects();
  std::string cur = objs[std::uniform_int_distribution<std::size_t>(0, objs.size() - 1)(rng)];
  std::string start = cur;
  std::vector<std::string> arrows;
  std::size_t len = std::uniform_int_distribution<std::size_t>(0, opt.max_path_len)(rng);
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<std::string> outs;
    for (const auto& a : base.arrows())
      if (a.src == cur) outs.push_back(a.name);
    if (outs.empty()) break;
    const std::string& a = outs[std::uniform_int_distribution<std::size_t>(0, outs.size() - 1)(rng)];
    arrows.push_back(a);
    cur = base.arrow(a).dst;
  }
  return random_fib_from(sig, star_lift(base, base.path(arrows, start)), rng, opt);
}

namespace {

// Compact pure-chi states for the probe. Arrows and objects are indices; a
// layer is chi id << 8 | strand offset.
struct ProbeChi {
  int src = 0, dst = 0;
  std::vector<int> top, bot;  // arrows in path order
  bool operator<(const ProbeChi& o) const {
    return std::tie(src, dst, top, bot) < std::tie(o.src, o.dst, o.top, o.bot);
  }
};

constexpr std::size_t kMaxProbeLayers = 8;
constexpr std::uint32_t kMaxProbeOffset = 0xff;
constexpr std::uint32_t kMaxProbeChis = 0xffffff;

struct ProbeState {
  std::array<std::uint32_t, kMaxProbeLayers> e{};
  std::uint32_t n = 0;

  bool operator==(const ProbeState& o) const { return n == o.n && e == o.e; }
  std::uint32_t chi(std::size_t i) const { return e[i] >> 8; }
  std::size_t k(std::size_t i) const { return e[i] & kMaxProbeOffset; }
  void set(std::size_t i, std::size_t chi, std::size_t k) {
    if (chi > kMaxProbeChis || k > kMaxProbeOffset)
      fail(ErrorCode::SearchLimit, "probe state exceeds the compact encoding");
    e[i] = static_cast<std::uint32_t>(chi << 8 | k);
  }
  void erase(std::size_t i) {
    for (std::size_t j = i; j + 1 < n; ++j) e[j] = e[j + 1];
    e[--n] = 0;
  }
};

struct ProbeStateHash {
  std::size_t operator()(const ProbeState& s) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ s.n;
    for (std::size_t i = 0; i < s.n; ++i) {
      h ^= s.e[i];
      h *= 0xff51afd7ed558ccdull;
      h ^= h >> 33;
    }
    return static_cast<std::size_t>(h);
  }
};

using ProbeSet = std::unordered_set<ProbeState, ProbeStateHash>;

class ProbeSpace {
 public:
  ProbeSpace(const Signature& sig, const OneCellPath& source) : sig_(sig), source_(source) {
    const BasePresentation& base = sig.b();
    for (const auto& o : base.objects()) obj_ids_.emplace(o, static_cast<int>(obj_ids_.size()));
    for (const auto& a : base.arrows()) {
      arrow_ids_.emplace(a.name, static_cast<int>(arrows_.size()));
      arrows_.push_back({obj_ids_.at(a.src), obj_ids_.at(a.dst)});
    }
    if (source.dom.terminal || !all_star(source))
      fail(ErrorCode::NotFibFragment, "probe source must be an all-star path");
    for (const auto& t : source.tokens) src_tokens_.push_back(arrow_ids_.at(t.name));
  }

  ProbeState from_diagram(const Diagram& d) {
    require_fib(d);
    if (d.source != source_) fail(ErrorCode::BoundaryMismatch, "probe source changed");
    if (d.layers.size() > kMaxProbeLayers)
      fail(ErrorCode::SearchLimit, "probe handles at most " + std::to_string(kMaxProbeLayers) +
                                       " layers");
    ProbeState s;
    s.n = static_cast<std::uint32_t>(d.layers.size());
    for (std::size_t i = 0; i < d.layers.size(); ++i) {
      const PolygonType& pt = d.layers[i].gen.pt;
      ProbeChi c{obj_ids_.at(pt.top.src), obj_ids_.at(pt.top.dst), ids(pt.top), ids(pt.bottom)};
      s.set(i, intern(c), d.layers[i].left.size());
    }
    return s;
  }

  Diagram to_diagram(const ProbeState& s) const {
    const BasePresentation& base = sig_.b();
    std::vector<std::pair<GenTwoCell, std::size_t>> ls;
    for (std::size_t i = 0; i < s.n; ++i) {
      const ProbeChi& c = chis_[s.chi(i)];
      const std::string& src = base.objects()[static_cast<std::size_t>(c.src)];
      Path top = base.path(names(c.top), src), bot = base.path(names(c.bot), src);
      // Every probe chi is pasted from the valid chis of the start diagram.
      base.record_equal(top, bot);
      ls.push_back({GenTwoCell::chi(top, bot), s.k(i)});
    }
    return from_offsets(sig_, source_, ls);
  }

  ProbeState canonical(const ProbeState& raw) {
    exchange_class(raw, members_);
    ProbeState best = raw;
    for (const auto& m : members_)
      if (less(m, best)) best = m;
    return best;
  }

  // Canonical one-step reducts under R1, R2, R3.1 and R3.2, taking redexes in
  // every layer ordering of the exchange class.
  std::vector<ProbeState> successors(const ProbeState& cur) {
    std::vector<ProbeState> out;
    auto emit = [&](const ProbeState& raw) {
      ProbeState c = canonical(raw);
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    };
    std::vector<ProbeState> members;
    exchange_class(cur, members);
    for (const ProbeState& m : members) {
      b_ = src_tokens_;
      for (std::size_t i = 0; i < m.n; ++i) {
        std::size_t k = m.k(i);
        std::size_t id = m.chi(i);
        std::size_t s = chis_[id].top.size();
        if (trivial_[id]) {
          ProbeState r = m;
          r.erase(i);
          emit(r);
        }
        if (k > 0) {
          ProbeState r = m;
          r.set(i, whisker(id, b_[k - 1], true), k - 1);
          emit(r);
        }
        if (k + s < b_.size()) {
          ProbeState r = m;
          r.set(i, whisker(id, b_[k + s], false), k);
          emit(r);
        }
        if (i + 1 < m.n && m.k(i + 1) == k) {
          std::size_t merged = merge(id, m.chi(i + 1));
          if (merged != kNone) {
            ProbeState r = m;
            r.set(i, merged, k);
            r.erase(i + 1);
            emit(r);
          }
        }
        const ProbeChi& c = chis_[id];
        nb_.assign(b_.begin(), b_.begin() + static_cast<std::ptrdiff_t>(k));
        nb_.insert(nb_.end(), c.bot.rbegin(), c.bot.rend());
        nb_.insert(nb_.end(), b_.begin() + static_cast<std::ptrdiff_t>(k + s), b_.end());
        std::swap(b_, nb_);
      }
    }
    return out;
  }

 private:
  std::vector<int> ids(const Path& p) const {
    std::vector<int> r;
    for (const auto& a : p.arrows) r.push_back(arrow_ids_.at(a));
    return r;
  }
  std::vector<std::string> names(const std::vector<int>& v) const {
    std::vector<std::string> r;
    for (int a : v) r.push_back(sig_.b().arrows()[static_cast<std::size_t>(a)].name);
    return r;
  }
  std::size_t intern(const ProbeChi& c) {
    auto [it, fresh] = chi_ids_.emplace(c, chis_.size());
    if (fresh) {
      chis_.push_back(c);
      trivial_.push_back(c.top == c.bot);
    }
    return it->second;
  }
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  // Chi whiskered by the strand of arrow a on its left (a after the paths) or right.
  std::size_t whisker(std::size_t id, int a, bool left) {
    std::uint64_t key = static_cast<std::uint64_t>(id) << 24 |
                        static_cast<std::uint64_t>(a) << 1 | (left ? 1u : 0u);
    auto it = whisker_memo_.find(key);
    if (it != whisker_memo_.end()) return it->second;
    const ProbeChi& c = chis_[id];
    ProbeChi w;
    if (left) {
      w = {c.src, arrows_[static_cast<std::size_t>(a)].second, c.top, c.bot};
      w.top.push_back(a);
      w.bot.push_back(a);
    } else {
      w = {arrows_[static_cast<std::size_t>(a)].first, c.dst, {a}, {a}};
      w.top.insert(w.top.end(), c.top.begin(), c.top.end());
      w.bot.insert(w.bot.end(), c.bot.begin(), c.bot.end());
    }
    std::size_t r = intern(w);
    whisker_memo_.emplace(key, r);
    return r;
  }

  // Vertical paste of upper then lower, or kNone when they do not match.
  std::size_t merge(std::size_t upper, std::size_t lower) {
    std::uint64_t key = static_cast<std::uint64_t>(upper) << 32 | lower;
    auto it = merge_memo_.find(key);
    if (it != merge_memo_.end()) return it->second;
    const ProbeChi& c = chis_[upper];
    const ProbeChi& n = chis_[lower];
    std::size_t r = kNone;
    if (n.src == c.src && n.dst == c.dst && n.top == c.bot)
      r = intern(ProbeChi{c.src, c.dst, c.top, n.bot});
    merge_memo_.emplace(key, r);
    return r;
  }

  std::size_t src_width(std::uint32_t chi) const { return chis_[chi].top.size(); }
  std::size_t tgt_width(std::uint32_t chi) const { return chis_[chi].bot.size(); }
  bool less(const ProbeState& a, const ProbeState& b) const {
    for (std::size_t i = 0; i < a.n; ++i) {
      auto ka = std::make_tuple(a.k(i), src_width(a.chi(i)) == 0 ? 0 : 1, a.chi(i));
      auto kb = std::make_tuple(b.k(i), src_width(b.chi(i)) == 0 ? 0 : 1, b.chi(i));
      if (ka != kb) return ka < kb;
    }
    return false;
  }
  void exchange_class(const ProbeState& s, std::vector<ProbeState>& all) const {
    all.assign(1, s);
    for (std::size_t q = 0; q < all.size(); ++q) {
      for (std::size_t i = 0; i + 1 < all[q].n; ++i) {
        std::uint32_t u = all[q].chi(i), l = all[q].chi(i + 1);
        std::size_t k1 = all[q].k(i), s1 = src_width(u), t1 = tgt_width(u);
        std::size_t k2 = all[q].k(i + 1), s2 = src_width(l), t2 = tgt_width(l);
        auto push = [&](std::size_t nk2, std::size_t nk1) {
          ProbeState n = all[q];
          n.set(i, l, nk2);
          n.set(i + 1, u, nk1);
          if (std::find(all.begin(), all.end(), n) == all.end()) all.push_back(n);
        };
        if (k2 + s2 <= k1) push(k2, k1 - s2 + t2);
        if (k2 >= k1 + t1) push(k2 - t1 + s1, k1);
      }
    }
  }

  const Signature& sig_;
  OneCellPath source_;
  std::map<std::string, int> obj_ids_, arrow_ids_;
  std::vector<std::pair<int, int>> arrows_;  // src, dst object ids
  std::vector<int> src_tokens_;
  std::vector<ProbeChi> chis_;
  std::vector<bool> trivial_;  // top == bottom
  std::map<ProbeChi, std::size_t> chi_ids_;
  std::unordered_map<std::uint64_t, std::size_t> whisker_memo_, merge_memo_;
  std::vector<ProbeState> members_;
  std::vector<int> b_, nb_;
};

}  // namespace

std::vector<Diagram> oriented_successors(const Signature& sig, const Diagram& d) {
  Diagram c = exchange_canonical(sig, d);
  if (c.source.dom.terminal) return {};
  ProbeSpace space(sig, c.source);
  std::vector<Diagram> out;
  for (const auto& n : space.successors(space.canonical(space.from_diagram(c))))
    out.push_back(exchange_canonical(sig, space.to_diagram(n)));
  return out;
}

ProbeReport probe_diagram(const Signature& sig, const Diagram& d0, const ProbeHook& hook,
                          const std::string& tag, std::size_t state_cap) {
  ProbeReport rep;
  rep.samples = 1;
  auto violation = [&](const std::string& m) {
    rep.violations++;
    rep.messages.push_back(tag + ": " + m);
  };
  Diagram d = exchange_canonical(sig, d0);
  if (d.source.dom.terminal) {
    rep.states_explored = 1;
    if (!d.layers.empty()) violation("layers over the terminal fiber");
    return rep;
  }
  ProbeSpace space(sig, d.source);
  ProbeState start = space.canonical(space.from_diagram(d));
  ProbeSet seen{start};
  std::vector<ProbeState> stack{start};
  std::vector<ProbeState> terminals;
  bool capped = false;
  while (!stack.empty() && !capped) {
    ProbeState cur = stack.back();
    stack.pop_back();
    auto succ = space.successors(cur);
    if (hook)
      for (const auto& e : hook(space.to_diagram(cur)))
        succ.push_back(space.canonical(space.from_diagram(e)));
    if (succ.empty()) terminals.push_back(cur);
    for (const auto& n : succ) {
      if (!seen.insert(n).second) continue;
      if (seen.size() > state_cap) {
        capped = true;
        break;
      }
      stack.push_back(n);
    }
  }
  rep.states_explored = seen.size();
  if (capped) {
    violation("state cap of " + std::to_string(state_cap) + " exceeded");
    return rep;
  }
  if (terminals.size() != 1) {
    violation(std::to_string(terminals.size()) + " terminal forms");
    return rep;
  }
  Diagram t = exchange_canonical(sig, space.to_diagram(terminals.front()));
  if (t != exchange_canonical(sig, normalize_fib(sig, d))) {
    violation("terminal form differs from normalize_fib");
    return rep;
  }
  Path top = star_unlift(sig.b(), d.source), bot = star_unlift(sig.b(), d.target);
  bool boundary_ok = top.arrows == bot.arrows
                         ? t.layers.empty()
                         : (t.layers.size() == 1 && t.layers[0].gen == GenTwoCell::chi(top, bot));
  if (!boundary_ok) violation("normal form is not the boundary chi");
  return rep;
}

ProbeReport confluence_probe(const Signature& sig, const RandomFibOptions& size,
                             std::size_t samples, std::uint64_t seed, const ProbeHook& hook) {
  ProbeReport rep;
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    Diagram d = random_fib_diagram(sig, rng, size);
    ProbeReport one = probe_diagram(sig, d, hook,
                                    "sample " + std::to_string(s) + " (" + d.source.str() +
                                        " => " + d.target.str() + ", " +
                                        std::to_string(d.size()) + " layers)");
    rep.samples++;
    rep.violations += one.violations;
    rep.states_explored += one.states_explored;
    rep.messages.insert(rep.messages.end(), one.messages.begin(), one.messages.end());
  }
  return rep;
}

}  // namespace sc
