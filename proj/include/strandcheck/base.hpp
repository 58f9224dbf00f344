#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "strandcheck/error.hpp"

namespace sc {

struct ArrowGen {
  std::string name;
  std::string src;
  std::string dst;
};

// Arrows are listed in application order, starting at src.
struct Path {
  std::string src;
  std::string dst;
  std::vector<std::string> arrows;

  bool empty() const { return arrows.empty(); }
  bool operator==(const Path& o) const {
    return src == o.src && dst == o.dst && arrows == o.arrows;
  }
  bool operator!=(const Path& o) const { return !(*this == o); }
};

struct PathRelation {
  Path lhs;
  Path rhs;
};

struct PolygonType {
  Path top;
  Path bottom;
  bool operator==(const PolygonType& o) const {
    return top == o.top && bottom == o.bottom;
  }
  bool operator!=(const PolygonType& o) const { return !(*this == o); }
};

// Square with top a: A->B, left c: A->C, right d: B->D, bottom b: C->D.
struct PullbackSquare {
  std::string label;
  std::string a, c, d, b;
};

enum class PathEq { Equal, NotProvenEqual };
enum class PasteKind { Vertical, Horizontal };

class BasePresentation {
 public:
  BasePresentation() = default;
  BasePresentation(const BasePresentation& o);
  BasePresentation& operator=(const BasePresentation& o);

  void add_object(const std::string& name);
  void add_arrow(const std::string& name, const std::string& src,
                 const std::string& dst);
  void add_relation(const Path& lhs, const Path& rhs);
  void add_square(const PullbackSquare& sq);
  // Drops the square from the marked set (used by negative controls).
  bool unmark_square(const std::string& label);

  bool has_object(const std::string& name) const;
  const ArrowGen* find_arrow(const std::string& name) const;
  const ArrowGen& arrow(const std::string& name) const;
  const PullbackSquare* find_square(const std::string& label) const;

  const std::vector<std::string>& objects() const { return objects_; }
  const std::vector<ArrowGen>& arrows() const { return arrows_; }
  const std::vector<PathRelation>& relations() const { return relations_; }
  const std::vector<PullbackSquare>& squares() const { return squares_; }

  int search_bound = 8;

  // Builds a path from arrow names; src must be given for the empty path.
  Path path(const std::vector<std::string>& arrows,
            const std::string& src = "") const;
  Path empty_path(const std::string& obj) const;
  void check_path(const Path& p) const;

  // Throws unless every relation and square is well typed and every
  // square commutes within the search bound.
  void validate() const;

  PathEq cached_equal(const Path& p, const Path& q) const;
  // Records p = q when it follows from proven equalities by composition and
  // transitivity, so later checks need not re-derive it within the bound.
  void record_equal(const Path& p, const Path& q) const;

 private:
  std::vector<std::string> objects_;
  std::vector<ArrowGen> arrows_;
  std::map<std::string, std::size_t> arrow_index_;
  std::vector<PathRelation> relations_;
  std::vector<PullbackSquare> squares_;

  mutable std::mutex cache_mu_;
  mutable std::unordered_map<std::string, PathEq> cache_;
  void clear_cache();
};

Path compose_paths(const Path& p, const Path& q);
Path compose_paths(std::initializer_list<Path> ps);
PathEq paths_equal(const BasePresentation& base, const Path& p,
                   const Path& q);

struct PolygonCheck {
  bool ok = false;
  std::optional<ErrorCode> error;
  std::string message;
};
PolygonCheck validate_polygon_type(const BasePresentation& base,
                                   const PolygonType& pt);
PolygonType opposite(const PolygonType& pt);
PolygonType paste_polygon_types(PasteKind kind, const PolygonType& pt1,
                                const PolygonType& pt2);

std::string path_to_string(const Path& p);

}  // namespace sc
