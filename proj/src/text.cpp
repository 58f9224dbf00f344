#include "strandcheck/text.hpp"

#include <cctype>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace sc {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

// Splits at top-level occurrences of sep (outside parentheses and braces).
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '{') ++depth;
    if (c == ')' || c == '}') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<OneCellToken> parse_tokens(const std::string& text) {
  std::vector<OneCellToken> toks;
  auto ws = words(text);
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const std::string& w = ws[i];
    if (w == "obj") {
      if (i + 1 >= ws.size()) fail(ErrorCode::ParseError, "obj needs NAME@OBJECT");
      const std::string& x = ws[++i];
      std::size_t at = x.find('@');
      if (at == std::string::npos || at == 0 || at + 1 == x.size())
        fail(ErrorCode::ParseError, "object generator '" + x + "' must read NAME@OBJECT");
      toks.push_back(OneCellToken::obj(x.substr(0, at), x.substr(at + 1)));
    } else if (w.size() > 1 && (w.back() == '*' || w.back() == '!')) {
      std::string a = w.substr(0, w.size() - 1);
      toks.push_back(w.back() == '*' ? OneCellToken::star(a) : OneCellToken::shriek(a));
    } else {
      fail(ErrorCode::ParseError, "bad 1-cell token '" + w + "'");
    }
  }
  return toks;
}

std::string print_tokens(const std::vector<OneCellToken>& toks) {
  std::string s;
  for (const auto& t : toks) {
    if (!s.empty()) s += " ";
    s += t.kind == TokKind::Obj ? "obj " + t.name + "@" + t.fiber : t.str();
  }
  return s;
}

class GenParser {
 public:
  GenParser(const Signature& sig, const std::string& s) : sig_(sig), s_(s) {}

  GenTwoCell top() {
    GenTwoCell g = gen(true);
    skip();
    if (i_ != s_.size()) error("trailing text");
    return g;
  }

 private:
  const Signature& sig_;
  const std::string& s_;
  std::size_t i_ = 0;

  [[noreturn]] void error(const std::string& m) {
    fail(ErrorCode::ParseError, "generator '" + s_ + "': " + m);
  }
  void skip() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }
  std::string ident() {
    skip();
    std::size_t b = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) ||
                              s_[i_] == '_' || s_[i_] == '.' || s_[i_] == '\''))
      ++i_;
    if (b == i_) error("expected a name at offset " + std::to_string(b));
    return s_.substr(b, i_ - b);
  }
  // Text up to the parenthesis matching the one at i_.
  std::string group() {
    skip();
    if (i_ >= s_.size() || s_[i_] != '(') error("expected '('");
    int depth = 0;
    std::size_t b = i_ + 1;
    for (; i_ < s_.size(); ++i_) {
      if (s_[i_] == '(' || s_[i_] == '{') ++depth;
      if (s_[i_] == ')' || s_[i_] == '}') {
        if (--depth == 0) {
          ++i_;
          return s_.substr(b, i_ - 1 - b);
        }
      }
    }
    error("unbalanced parentheses");
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }

  GenTwoCell gen(bool allow_brace) {
    if (peek('{')) {
      if (!allow_brace) error("nested macro arguments are written without braces");
      ++i_;
      GenTwoCell g = macro_term();
      skip();
      if (!peek('}')) error("expected '}'");
      ++i_;
      return g;
    }
    std::size_t save = i_;
    std::string name = ident();
    if (name == "chi") {
      auto parts = split_top(group(), ';');
      if (parts.size() != 2) error("chi takes top;bottom");
      return GenTwoCell::chi(parse_path(sig_.b(), parts[0]), parse_path(sig_.b(), parts[1]));
    }
    if (name == "eta" || name == "eps" || name == "bcbar") {
      std::string arg = trim(group());
      if (name == "eta") return GenTwoCell::eta(arg);
      if (name == "eps") return GenTwoCell::eps(arg);
      return GenTwoCell::bcbar(arg);
    }
    if (name == "alpha" || name == "phi" || name == "beta") return GenTwoCell::descent(name);
    if (is_builtin_macro(name)) {
      i_ = save;
      return macro_term();
    }
    error("unknown generator " + name);
  }

  GenTwoCell macro_term() {
    std::string name = ident();
    bool builtin = is_builtin_macro(name);
    if (!builtin && !(sig_.user_macros && sig_.user_macros->find(name)))
      fail(ErrorCode::UnknownName, "unknown macro " + name);
    std::vector<std::string> params;
    std::vector<GenTwoCell> args;
    if (peek('(')) {
      auto items = split_top(group(), ',');
      std::size_t cells = macro_cell_arity(name);
      if (items.size() < cells) error(name + " needs " + std::to_string(cells) + " 2-cell arguments");
      for (std::size_t k = 0; k < items.size(); ++k) {
        if (k + cells < items.size()) {
          params.push_back(items[k]);
        } else {
          GenParser sub(sig_, items[k]);
          args.push_back(sub.gen(false));
          sub.skip();
          if (sub.i_ != items[k].size()) error("trailing text in argument " + items[k]);
        }
      }
    }
    return GenTwoCell::macro(name, std::move(params), std::move(args));
  }
};

struct Line {
  std::size_t no;
  std::string text;
};

struct Section {
  std::string kind;
  std::string arg;
  std::size_t no;
  std::vector<Line> lines;
};

Position parse_position(const std::string& text) {
  static const std::regex re(R"(layers:\s*(\d+)\.\.(-?\d+)\s*,\s*strand:\s*(\d+))");
  std::smatch m;
  std::string t = trim(text);
  if (!std::regex_match(t, m, re)) fail(ErrorCode::ParseError, "bad position '" + t + "'");
  long a = std::stol(m[1]), b = std::stol(m[2]);
  if (b < a - 1) fail(ErrorCode::ParseError, "empty position range '" + t + "'");
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b - a + 1),
          static_cast<std::size_t>(std::stoul(m[3]))};
}

Direction parse_direction(const std::string& s) {
  if (s == "fwd") return Direction::Fwd;
  if (s == "bwd") return Direction::Bwd;
  fail(ErrorCode::ParseError, "direction must be fwd or bwd, got '" + s + "'");
}

void parse_justification(const Signature& sig, const std::string& text, ProofStep& st) {
  std::string t = trim(text);
  if (t == "canonical") {
    st.kind = StepKind::Canonical;
    return;
  }
  if (t == "coherence") {
    st.kind = StepKind::Coherence;
    return;
  }
  if (starts_with(t, "rule ")) {
    st.kind = StepKind::Rule;
    std::string rest = trim(t.substr(5));
    std::size_t open = rest.find('(');
    std::size_t close = rest.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
      fail(ErrorCode::ParseError, "rule step needs NAME(bindings) fwd|bwd");
    st.name = trim(rest.substr(0, open));
    std::string binds = rest.substr(open + 1, close - open - 1);
    if (!trim(binds).empty())
      for (const auto& item : split_top(binds, ',')) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos) fail(ErrorCode::ParseError, "binding '" + item + "' lacks '='");
        st.binding[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
      }
    st.dir = parse_direction(trim(rest.substr(close + 1)));
    return;
  }
  if (starts_with(t, "macro ")) {
    auto ws = words(t);
    if (ws.size() < 3) fail(ErrorCode::ParseError, "macro step needs fold|unfold MACRO");
    if (ws[1] == "fold") st.kind = StepKind::MacroFold;
    else if (ws[1] == "unfold") st.kind = StepKind::MacroUnfold;
    else fail(ErrorCode::ParseError, "macro step needs fold or unfold, got " + ws[1]);
    std::string g = trim(t.substr(t.find(ws[1]) + ws[1].size()));
    st.macro = parse_generator(sig, g);
    if (st.macro.kind != GenKind::Macro) fail(ErrorCode::ParseError, g + " is not a macro");
    return;
  }
  auto ws = words(t);
  if (ws.size() == 3 && (ws[0] == "axiom" || ws[0] == "prior")) {
    st.kind = ws[0] == "axiom" ? StepKind::Axiom : StepKind::Prior;
    st.name = ws[1];
    st.dir = parse_direction(ws[2]);
    return;
  }
  fail(ErrorCode::ParseError, "unknown justification '" + t + "'");
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IOError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string print_cell_path(const OneCellPath& p) {
  if (p.tokens.empty()) return "id(" + p.dom.str() + ")";
  return print_tokens(p.tokens);
}

OneCellPath parse_cell_path(const Signature& sig, const std::string& text) {
  std::string t = trim(text);
  if (starts_with(t, "id(") && t.back() == ')') {
    std::string o = trim(t.substr(3, t.size() - 4));
    if (o == "1") return empty_cell_path(FiberSym::term());
    if (!sig.b().has_object(o)) fail(ErrorCode::UnknownName, "unknown object " + o);
    return empty_cell_path(FiberSym::of(o));
  }
  auto toks = parse_tokens(t);
  if (toks.empty()) fail(ErrorCode::ParseError, "empty 1-cell path; write id(OBJECT)");
  return make_cell_path(sig, token_dom(sig, toks.front()), toks);
}

GenTwoCell parse_generator(const Signature& sig, const std::string& text) {
  std::string t = trim(text);
  return GenParser(sig, t).top();
}

std::string print_diagram_block(const std::string& name, Extension e, const Diagram& d) {
  std::string s = "[diagram " + name + " : " + print_cell_path(d.source) + " => " +
                  print_cell_path(d.target) + "]\n";
  s += "extension " + std::string(extension_name(e)) + "\n";
  for (const auto& l : d.layers) {
    std::string line = "layer " + print_tokens(l.left.tokens) + " | " + l.gen.str() + " | " +
                       print_tokens(l.right.tokens);
    s += trim(line) + "\n";
  }
  return s;
}

const NamedDiagram* ScriptFile::find_diagram(const std::string& name) const {
  for (const auto& d : diagrams)
    if (d.name == name) return &d;
  return nullptr;
}

Signature ScriptFile::signature(Extension e) const {
  Signature s = defaults;
  s.base = base;
  s.extension = e;
  s.user_macros = macros;
  return s;
}

ScriptFile parse_script_file(const std::string& text, const std::string& origin) {
  std::vector<Section> sections;
  {
    std::istringstream in(text);
    std::string raw;
    std::size_t no = 0;
    static const std::regex header(R"(\[\s*([A-Za-z]+)\s*(.*?)\s*\])");
    while (std::getline(in, raw)) {
      ++no;
      std::size_t hash = raw.find('#');
      std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (line.empty()) continue;
      std::smatch m;
      if (line.front() == '[') {
        if (!std::regex_match(line, m, header))
          fail(ErrorCode::ParseError, origin + ":" + std::to_string(no) + ": malformed section header");
        sections.push_back({m[1], m[2], no, {}});
        continue;
      }
      if (sections.empty())
        fail(ErrorCode::ParseError, origin + ":" + std::to_string(no) + ": text before any section");
      sections.back().lines.push_back({no, line});
    }
  }

  ScriptFile f;
  f.base = std::make_shared<BasePresentation>();
  f.macros = std::make_shared<MacroTable>();
  f.defaults.base = f.base;
  f.defaults.user_macros = f.macros;
  bool have_base = false;
  std::set<std::string> script_names;

  for (const auto& sec : sections) {
    std::size_t no = sec.no;
    auto where = [&]() { return origin + ":" + std::to_string(no) + ": "; };
    try {
      if (sec.kind == "base") {
        if (have_base) fail(ErrorCode::ParseError, "duplicate [base] section");
        if (!sec.arg.empty()) fail(ErrorCode::ParseError, "[base] takes no argument");
        have_base = true;
        static const std::regex arrow_re(R"(arrow\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+))");
        static const std::regex pb_re(
            R"(pullback\s+(\S+)\s*:\s*a=(\S+)\s+c=(\S+)\s+d=(\S+)\s+b=(\S+))");
        for (const auto& ln : sec.lines) {
          no = ln.no;
          std::smatch m;
          auto ws = words(ln.text);
          if (ws[0] == "object" && ws.size() == 2) {
            f.base->add_object(ws[1]);
          } else if (std::regex_match(ln.text, m, arrow_re)) {
            f.base->add_arrow(m[1], m[2], m[3]);
          } else if (ws[0] == "relation") {
            auto parts = split_top(ln.text.substr(8), '=');
            if (parts.size() != 2) fail(ErrorCode::ParseError, "relation needs PATH = PATH");
            Path l = parse_path(*f.base, parts[0]);
            Path r = parse_path(*f.base, parts[1]);
            if (l.arrows.empty() && !r.arrows.empty()) l = f.base->empty_path(r.src);
            if (r.arrows.empty() && !l.arrows.empty()) r = f.base->empty_path(l.src);
            f.base->add_relation(l, r);
          } else if (std::regex_match(ln.text, m, pb_re)) {
            f.base->add_square({m[1], m[2], m[3], m[4], m[5]});
          } else {
            fail(ErrorCode::ParseError, "unrecognized base line '" + ln.text + "'");
          }
        }
        no = sec.no;
        f.base->validate();
      } else if (sec.kind == "signature") {
        if (!have_base) fail(ErrorCode::ParseError, "[signature] before [base]");
        for (const auto& ln : sec.lines) {
          no = ln.no;
          auto ws = words(ln.text);
          if (ws.size() != 2) fail(ErrorCode::ParseError, "signature lines read KEY VALUE");
          if (ws[0] == "extension") f.defaults.extension = extension_from_name(ws[1]);
          else if (ws[0] == "f") f.defaults.f = ws[1];
          else if (ws[0] == "object") f.defaults.x_name = ws[1];
          else if (ws[0] == "kernel") f.defaults.kernel_square = ws[1];
          else fail(ErrorCode::ParseError, "unknown signature key " + ws[0]);
        }
        no = sec.no;
        f.base->arrow(f.defaults.f);
      } else if (sec.kind == "macros") {
        for (const auto& ln : sec.lines) {
          no = ln.no;
          static const std::regex mac_re(R"(macro\s+(\S+)\s*=\s*(\S+))");
          std::smatch m;
          if (!std::regex_match(ln.text, m, mac_re))
            fail(ErrorCode::ParseError, "macro lines read 'macro NAME = DIAGRAM'");
          const NamedDiagram* d = f.find_diagram(m[2]);
          if (!d) fail(ErrorCode::UnknownName, "macro body " + std::string(m[2]) + " is not defined above");
          std::string name = m[1];
          if (name == "alpha" || name == "phi" || name == "beta" || name == "chi" ||
              name == "eta" || name == "eps" || name == "bcbar")
            fail(ErrorCode::InvalidBinding, "macro name " + name + " is reserved");
          f.macros->add(name, d->diagram);
          f.macro_defs.push_back({name, m[2]});
        }
      } else if (sec.kind == "diagram") {
        if (!have_base) fail(ErrorCode::ParseError, "[diagram] before [base]");
        static const std::regex dia_re(R"((\S+)\s*:\s*(.+?)\s*=>\s*(.+))");
        std::smatch m;
        if (!std::regex_match(sec.arg, m, dia_re))
          fail(ErrorCode::ParseError, "diagram header reads [diagram NAME : SOURCE => TARGET]");
        NamedDiagram nd;
        nd.name = m[1];
        if (f.find_diagram(nd.name)) fail(ErrorCode::ParseError, "duplicate diagram " + nd.name);
        nd.extension = f.defaults.extension;
        std::size_t first = 0;
        if (!sec.lines.empty() && starts_with(sec.lines[0].text, "extension")) {
          no = sec.lines[0].no;
          auto ws = words(sec.lines[0].text);
          if (ws.size() != 2) fail(ErrorCode::ParseError, "extension line reads 'extension NAME'");
          nd.extension = extension_from_name(ws[1]);
          first = 1;
        }
        Signature sig = f.signature(nd.extension);
        nd.diagram = identity_diagram(parse_cell_path(sig, m[2]));
        for (std::size_t i = first; i < sec.lines.size(); ++i) {
          no = sec.lines[i].no;
          const std::string& t = sec.lines[i].text;
          if (!starts_with(t, "layer")) fail(ErrorCode::ParseError, "expected a layer line");
          auto parts = split_top(t.substr(5), '|');
          if (parts.size() != 3) fail(ErrorCode::ParseError, "layer reads LEFT | GENERATOR | RIGHT");
          auto left = parse_tokens(parts[0]);
          auto right = parse_tokens(parts[2]);
          GenTwoCell g = parse_generator(sig, parts[1]);
          push_layer(sig, nd.diagram, g, left.size());
          const Layer& l = nd.diagram.layers.back();
          if (l.left.tokens != left || l.right.tokens != right)
            fail(ErrorCode::BoundaryMismatch, "layer whiskers do not match the running boundary " +
                                                  print_cell_path(l.left) + " | " + g.str() +
                                                  " | " + print_cell_path(l.right));
        }
        no = sec.no;
        OneCellPath tgt = parse_cell_path(sig, m[3]);
        if (tgt != nd.diagram.target)
          fail(ErrorCode::BoundaryMismatch, "diagram " + nd.name + " ends at " +
                                                print_cell_path(nd.diagram.target) +
                                                ", header says " + print_cell_path(tgt));
        f.diagrams.push_back(std::move(nd));
      } else if (sec.kind == "script") {
        if (sec.arg.empty() || words(sec.arg).size() != 1)
          fail(ErrorCode::ParseError, "script header reads [script NAME]");
        if (!script_names.insert(sec.arg).second)
          fail(ErrorCode::ParseError, "duplicate script " + sec.arg);
        ProofScript ps;
        ScriptRefs refs;
        ps.name = sec.arg;
        Extension ext = f.defaults.extension;
        bool have_claim = false;
        auto diagram = [&](const std::string& n) -> const Diagram& {
          const NamedDiagram* d = f.find_diagram(trim(n));
          if (!d) fail(ErrorCode::UnknownName, "unknown diagram " + trim(n));
          return d->diagram;
        };
        for (const auto& ln : sec.lines) {
          no = ln.no;
          auto ws = words(ln.text);
          if (ws[0] == "extension") {
            if (have_claim || ws.size() != 2)
              fail(ErrorCode::ParseError, "extension must precede the claim");
            ext = extension_from_name(ws[1]);
          } else if (ws[0] == "requires") {
            ps.requires_.insert(ps.requires_.end(), ws.begin() + 1, ws.end());
          } else if (ws[0] == "claim") {
            if (have_claim) fail(ErrorCode::ParseError, "duplicate claim");
            auto parts = split_top(ln.text.substr(5), '=');
            if (parts.size() != 2) fail(ErrorCode::ParseError, "claim reads LHS = RHS");
            ps.lhs = diagram(parts[0]);
            ps.rhs = diagram(parts[1]);
            refs.lhs = parts[0];
            refs.rhs = parts[1];
            have_claim = true;
          } else if (ws[0] == "step") {
            if (!have_claim) fail(ErrorCode::ParseError, "step before claim");
            std::string body = ln.text.substr(4);
            std::size_t arrow = body.rfind("->");
            if (arrow == std::string::npos) fail(ErrorCode::ParseError, "step lacks '-> DIAGRAM'");
            std::string res = trim(body.substr(arrow + 2));
            std::string just = body.substr(0, arrow);
            ProofStep st;
            std::size_t at = just.find(" @ ");
            bool has_pos = at != std::string::npos;
            parse_justification(f.signature(ext), has_pos ? just.substr(0, at) : just, st);
            if (has_pos) st.pos = parse_position(just.substr(at + 3));
            else if (st.kind != StepKind::Canonical)
              fail(ErrorCode::ParseError, "step needs '@ layers:a..b, strand:k'");
            st.result = diagram(res);
            refs.steps.push_back(res);
            ps.steps.push_back(std::move(st));
          } else {
            fail(ErrorCode::ParseError, "unrecognized script line '" + ln.text + "'");
          }
        }
        if (!have_claim) fail(ErrorCode::ParseError, "script " + ps.name + " has no claim");
        ps.sig = f.signature(ext);
        f.scripts.push_back(std::move(ps));
        f.refs.push_back(std::move(refs));
      } else {
        fail(ErrorCode::ParseError, "unknown section [" + sec.kind + "]");
      }
    } catch (const Error& e) {
      throw Error(e.code(), where() + e.what());
    }
  }
  if (!have_base) fail(ErrorCode::ParseError, origin + ": missing [base] section");
  return f;
}

ScriptFile read_script_file(const std::string& path) { return parse_script_file(read_all(path), path); }

std::string print_script_file(const ScriptFile& f) {
  std::string s = "[base]\n";
  const BasePresentation& b = *f.base;
  for (const auto& o : b.objects()) s += "object " + o + "\n";
  for (const auto& a : b.arrows()) s += "arrow " + a.name + " : " + a.src + " -> " + a.dst + "\n";
  for (const auto& r : b.relations())
    s += "relation " + path_to_string(r.lhs) + " = " + path_to_string(r.rhs) + "\n";
  for (const auto& q : b.squares())
    s += "pullback " + q.label + " : a=" + q.a + " c=" + q.c + " d=" + q.d + " b=" + q.b + "\n";
  s += "\n[signature]\n";
  s += "extension " + std::string(extension_name(f.defaults.extension)) + "\n";
  s += "f " + f.defaults.f + "\n";
  s += "object " + f.defaults.x_name + "\n";
  s += "kernel " + f.defaults.kernel_square + "\n";

  std::set<std::string> printed;
  auto print_named = [&](const std::string& name) {
    if (!printed.insert(name).second) return;
    const NamedDiagram* d = f.find_diagram(name);
    if (!d) fail(ErrorCode::UnknownName, "unknown diagram " + name);
    s += "\n" + print_diagram_block(d->name, d->extension, d->diagram);
  };
  if (!f.macro_defs.empty()) {
    for (const auto& [m, dn] : f.macro_defs) print_named(dn);
    s += "\n[macros]\n";
    for (const auto& [m, dn] : f.macro_defs) s += "macro " + m + " = " + dn + "\n";
  }
  for (const auto& d : f.diagrams) print_named(d.name);
  for (std::size_t i = 0; i < f.scripts.size(); ++i) {
    const ProofScript& ps = f.scripts[i];
    const ScriptRefs& r = f.refs.at(i);
    s += "\n[script " + ps.name + "]\n";
    s += "extension " + std::string(extension_name(ps.sig.extension)) + "\n";
    if (!ps.requires_.empty()) {
      s += "requires";
      for (const auto& q : ps.requires_) s += " " + q;
      s += "\n";
    }
    s += "claim " + r.lhs + " = " + r.rhs + "\n";
    for (std::size_t k = 0; k < ps.steps.size(); ++k) {
      const ProofStep& st = ps.steps[k];
      s += "step " + justification_to_string(st);
      if (st.kind != StepKind::Canonical) s += " @ " + position_to_string(st.pos);
      s += " -> " + r.steps.at(k) + "\n";
    }
  }
  return s;
}

ScriptFile script_file_for(const std::vector<ProofScript>& scripts) {
  ScriptFile f;
  if (scripts.empty()) fail(ErrorCode::InvalidBinding, "no scripts to export");
  const Signature& s0 = scripts.front().sig;
  f.base = std::make_shared<BasePresentation>(s0.b());
  f.macros = std::make_shared<MacroTable>();
  if (s0.user_macros) *f.macros = *s0.user_macros;
  f.defaults = s0;
  f.defaults.base = f.base;
  f.defaults.user_macros = f.macros;
  f.defaults.extension = Extension::None;
  for (const auto& [name, d] : f.macros->all()) {
    f.diagrams.push_back({"macro." + name, Extension::None, d});
    f.macro_defs.push_back({name, "macro." + name});
  }
  for (const auto& ps : scripts) {
    if (ps.sig.base != s0.base && ps.sig.base.get() != s0.base.get())
      fail(ErrorCode::InvalidBinding, "scripts in one file must share a base presentation");
    Extension e = ps.sig.extension;
    ScriptRefs r{ps.name + ".lhs", ps.name + ".rhs", {}};
    f.diagrams.push_back({r.lhs, e, ps.lhs});
    f.diagrams.push_back({r.rhs, e, ps.rhs});
    for (std::size_t k = 0; k < ps.steps.size(); ++k) {
      r.steps.push_back(ps.name + "." + std::to_string(k + 1));
      f.diagrams.push_back({r.steps.back(), e, ps.steps[k].result});
    }
    ProofScript copy = ps;
    copy.sig = f.signature(e);
    f.scripts.push_back(std::move(copy));
    f.refs.push_back(std::move(r));
  }
  return f;
}

}  // namespace sc
