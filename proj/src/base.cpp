#include "strandcheck/base.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace sc {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonComposable: return "NonComposable";
    case ErrorCode::NotParallel: return "NotParallel";
    case ErrorCode::ValueEqualityNotProven: return "ValueEqualityNotProven";
    case ErrorCode::BoundaryMismatch: return "BoundaryMismatch";
    case ErrorCode::InvalidGenerator: return "InvalidGenerator";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::InvalidBinding: return "InvalidBinding";
    case ErrorCode::SideConditionFailed: return "SideConditionFailed";
    case ErrorCode::PatternNotFound: return "PatternNotFound";
    case ErrorCode::RegionNotPureChi: return "RegionNotPureChi";
    case ErrorCode::BoundaryChanged: return "BoundaryChanged";
    case ErrorCode::ResultMismatch: return "ResultMismatch";
    case ErrorCode::NotFibFragment: return "NotFibFragment";
    case ErrorCode::UnprovenDependency: return "UnprovenDependency";
    case ErrorCode::EnvMissing: return "EnvMissing";
    case ErrorCode::RelationViolated: return "RelationViolated";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::IOError: return "IOError";
    case ErrorCode::SearchLimit: return "SearchLimit";
  }
  return "Unknown";
}

BasePresentation::BasePresentation(const BasePresentation& o)
    : search_bound(o.search_bound),
      objects_(o.objects_),
      arrows_(o.arrows_),
      arrow_index_(o.arrow_index_),
      relations_(o.relations_),
      squares_(o.squares_) {}

BasePresentation& BasePresentation::operator=(const BasePresentation& o) {
  if (this != &o) {
    search_bound = o.search_bound;
    objects_ = o.objects_;
    arrows_ = o.arrows_;
    arrow_index_ = o.arrow_index_;
    relations_ = o.relations_;
    squares_ = o.squares_;
    clear_cache();
  }
  return *this;
}

void BasePresentation::clear_cache() {
  std::lock_guard<std::mutex> lock(cache_mu_);
  cache_.clear();
}

void BasePresentation::add_object(const std::string& name) {
  if (has_object(name)) fail(ErrorCode::InvalidBinding, "duplicate object " + name);
  objects_.push_back(name);
}

void BasePresentation::add_arrow(const std::string& name, const std::string& src,
                                 const std::string& dst) {
  if (arrow_index_.count(name)) fail(ErrorCode::InvalidBinding, "duplicate arrow " + name);
  if (!has_object(src) || !has_object(dst))
    fail(ErrorCode::InvalidBinding, "arrow " + name + " has unknown endpoint");
  arrow_index_[name] = arrows_.size();
  arrows_.push_back({name, src, dst});
  clear_cache();
}

void BasePresentation::add_relation(const Path& lhs, const Path& rhs) {
  check_path(lhs);
  check_path(rhs);
  if (lhs.src != rhs.src || lhs.dst != rhs.dst)
    fail(ErrorCode::NotParallel,
         "relation " + path_to_string(lhs) + " = " + path_to_string(rhs));
  relations_.push_back({lhs, rhs});
  clear_cache();
}

void BasePresentation::add_square(const PullbackSquare& sq) {
  if (find_square(sq.label)) fail(ErrorCode::InvalidBinding, "duplicate square " + sq.label);
  const ArrowGen& a = arrow(sq.a);
  const ArrowGen& c = arrow(sq.c);
  const ArrowGen& d = arrow(sq.d);
  const ArrowGen& b = arrow(sq.b);
  if (a.src != c.src || a.dst != d.src || c.dst != b.src || d.dst != b.dst)
    fail(ErrorCode::NotParallel, "square " + sq.label + " is not a square");
  squares_.push_back(sq);
}

bool BasePresentation::unmark_square(const std::string& label) {
  auto it = std::find_if(squares_.begin(), squares_.end(),
                         [&](const PullbackSquare& s) { return s.label == label; });
  if (it == squares_.end()) return false;
  squares_.erase(it);
  return true;
}

bool BasePresentation::has_object(const std::string& name) const {
  return std::find(objects_.begin(), objects_.end(), name) != objects_.end();
}

const ArrowGen* BasePresentation::find_arrow(const std::string& name) const {
  auto it = arrow_index_.find(name);
  return it == arrow_index_.end() ? nullptr : &arrows_[it->second];
}

const ArrowGen& BasePresentation::arrow(const std::string& name) const {
  const ArrowGen* a = find_arrow(name);
  if (!a) fail(ErrorCode::UnknownName, "unknown arrow " + name);
  return *a;
}

const PullbackSquare* BasePresentation::find_square(const std::string& label) const {
  for (const auto& s : squares_)
    if (s.label == label) return &s;
  return nullptr;
}

Path BasePresentation::path(const std::vector<std::string>& arrows,
                            const std::string& src) const {
  Path p;
  if (arrows.empty()) {
    if (!has_object(src)) fail(ErrorCode::UnknownName, "unknown object " + src);
    p.src = p.dst = src;
    return p;
  }
  p.src = arrow(arrows.front()).src;
  if (!src.empty() && src != p.src)
    fail(ErrorCode::NonComposable, "path does not start at " + src);
  p.arrows = arrows;
  p.dst = p.src;
  for (const auto& n : arrows) {
    const ArrowGen& a = arrow(n);
    if (a.src != p.dst) fail(ErrorCode::NonComposable, "arrow " + n + " does not compose");
    p.dst = a.dst;
  }
  return p;
}

Path BasePresentation::empty_path(const std::string& obj) const { return path({}, obj); }

void BasePresentation::check_path(const Path& p) const {
  if (!has_object(p.src) || !has_object(p.dst))
    fail(ErrorCode::UnknownName, "path endpoint unknown in " + path_to_string(p));
  std::string cur = p.src;
  for (const auto& n : p.arrows) {
    const ArrowGen& a = arrow(n);
    if (a.src != cur) fail(ErrorCode::NonComposable, "ill-typed path " + path_to_string(p));
    cur = a.dst;
  }
  if (cur != p.dst) fail(ErrorCode::NonComposable, "ill-typed path " + path_to_string(p));
}

void BasePresentation::validate() const {
  for (const auto& r : relations_) {
    check_path(r.lhs);
    check_path(r.rhs);
  }
  for (const auto& s : squares_) {
    Path top = path({s.a, s.d});
    Path bot = path({s.c, s.b});
    if (paths_equal(*this, top, bot) != PathEq::Equal)
      fail(ErrorCode::ValueEqualityNotProven, "square " + s.label + " does not commute");
  }
}

Path compose_paths(const Path& p, const Path& q) {
  if (p.dst != q.src)
    fail(ErrorCode::NonComposable, path_to_string(p) + " then " + path_to_string(q));
  Path r;
  r.src = p.src;
  r.dst = q.dst;
  r.arrows = p.arrows;
  r.arrows.insert(r.arrows.end(), q.arrows.begin(), q.arrows.end());
  return r;
}

Path compose_paths(std::initializer_list<Path> ps) {
  auto it = ps.begin();
  Path r = *it++;
  for (; it != ps.end(); ++it) r = compose_paths(r, *it);
  return r;
}

std::string path_to_string(const Path& p) {
  if (p.arrows.empty()) return "id(" + p.src + ")";
  std::string s;
  for (std::size_t i = 0; i < p.arrows.size(); ++i) {
    if (i) s += ";";
    s += p.arrows[i];
  }
  return s;
}

namespace {

using Word = std::vector<std::string>;

std::string word_key(const Word& w) {
  std::string k;
  for (const auto& a : w) {
    k += a;
    k += '\x1f';
  }
  return k;
}

// All words reachable from w by one relation rewrite in either direction.
void neighbours(const BasePresentation& base, const std::string& src, const Word& w,
                std::vector<Word>& out) {
  std::vector<std::string> objs(w.size() + 1);
  objs[0] = src;
  for (std::size_t i = 0; i < w.size(); ++i) objs[i + 1] = base.arrow(w[i]).dst;
  for (const auto& rel : base.relations()) {
    for (int dir = 0; dir < 2; ++dir) {
      const Path& from = dir == 0 ? rel.lhs : rel.rhs;
      const Path& to = dir == 0 ? rel.rhs : rel.lhs;
      std::size_t n = from.arrows.size();
      if (n > w.size()) continue;
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

}  // namespace

PathEq BasePresentation::cached_equal(const Path& p, const Path& q) const {
  std::string key = p.src + "|" + word_key(p.arrows) + "|" + word_key(q.arrows);
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  // Bidirectional breadth-first search: rewrites are symmetric, so a chain of
  // length <= bound exists iff the two frontiers meet within ceil/floor halves.
  PathEq result = PathEq::NotProvenEqual;
  if (p.arrows == q.arrows) {
    result = PathEq::Equal;
  } else {
    int fwd_depth = (search_bound + 1) / 2;
    int bwd_depth = search_bound / 2;
    std::unordered_map<std::string, int> seen_f, seen_b;
    std::vector<Word> layer_f{p.arrows}, layer_b{q.arrows};
    seen_f[word_key(p.arrows)] = 0;
    seen_b[word_key(q.arrows)] = 0;
    auto expand = [&](std::vector<Word>& layer, std::unordered_map<std::string, int>& seen,
                      const std::unordered_map<std::string, int>& other, int depth,
                      int other_max) -> bool {
      std::vector<Word> next;
      std::vector<Word> nb;
      for (const auto& w : layer) {
        nb.clear();
        neighbours(*this, p.src, w, nb);
        for (auto& v : nb) {
          std::string k = word_key(v);
          if (seen.count(k)) continue;
          seen[k] = depth;
          auto it = other.find(k);
          if (it != other.end() && depth + it->second <= search_bound) return true;
          (void)other_max;
          next.push_back(std::move(v));
        }
      }
      layer = std::move(next);
      return false;
    };
    bool found = false;
    int df = 0, db = 0;
    while (!found && (df < fwd_depth || db < bwd_depth)) {
      if (df < fwd_depth && (df <= db || db >= bwd_depth)) {
        ++df;
        found = expand(layer_f, seen_f, seen_b, df, db);
      } else {
        ++db;
        found = expand(layer_b, seen_b, seen_f, db, df);
      }
      if (layer_f.empty() && layer_b.empty()) break;
    }
    if (found) result = PathEq::Equal;
  }
  std::lock_guard<std::mutex> lock(cache_mu_);
  cache_[key] = result;
  return result;
}

void BasePresentation::record_equal(const Path& p, const Path& q) const {
  if (p.src != q.src || p.dst != q.dst)
    fail(ErrorCode::NotParallel, path_to_string(p) + " vs " + path_to_string(q));
  std::lock_guard<std::mutex> lock(cache_mu_);
  cache_[p.src + "|" + word_key(p.arrows) + "|" + word_key(q.arrows)] = PathEq::Equal;
  cache_[q.src + "|" + word_key(q.arrows) + "|" + word_key(p.arrows)] = PathEq::Equal;
}

PathEq paths_equal(const BasePresentation& base, const Path& p, const Path& q) {
  base.check_path(p);
  base.check_path(q);
  if (p.src != q.src || p.dst != q.dst)
    fail(ErrorCode::NotParallel, path_to_string(p) + " vs " + path_to_string(q));
  return base.cached_equal(p, q);
}

PolygonCheck validate_polygon_type(const BasePresentation& base, const PolygonType& pt) {
  PolygonCheck r;
  try {
    base.check_path(pt.top);
    base.check_path(pt.bottom);
  } catch (const Error& e) {
    r.error = e.code();
    r.message = e.what();
    return r;
  }
  if (pt.top.src != pt.bottom.src || pt.top.dst != pt.bottom.dst) {
    r.error = ErrorCode::NotParallel;
    r.message = path_to_string(pt.top) + " vs " + path_to_string(pt.bottom);
    return r;
  }
  if (base.cached_equal(pt.top, pt.bottom) != PathEq::Equal) {
    r.error = ErrorCode::ValueEqualityNotProven;
    r.message = path_to_string(pt.top) + " vs " + path_to_string(pt.bottom);
    return r;
  }
  r.ok = true;
  return r;
}

PolygonType opposite(const PolygonType& pt) { return {pt.bottom, pt.top}; }

PolygonType paste_polygon_types(PasteKind kind, const PolygonType& pt1,
                                const PolygonType& pt2) {
  if (kind == PasteKind::Vertical) {
    if (pt1.bottom != pt2.top)
      fail(ErrorCode::BoundaryMismatch, "vertical paste needs bottom(pt1) = top(pt2)");
    return {pt1.top, pt2.bottom};
  }
  if (pt1.top.dst != pt2.top.src)
    fail(ErrorCode::BoundaryMismatch, "horizontal paste needs matching objects");
  return {compose_paths(pt1.top, pt2.top), compose_paths(pt1.bottom, pt2.bottom)};
}

}  // namespace sc
