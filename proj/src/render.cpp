#include "strandcheck/render.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace sc {

namespace {

constexpr double kDx = 60, kDy = 60, kMargin = 30;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

std::string tex_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '_' || c == '&' || c == '#' || c == '%' || c == '$') o += '\\';
    o += c;
  }
  return o;
}

struct Node {
  double x, y, half;
  std::string label;     // short label drawn in the node
  std::string full;      // full generator text
  std::string fill;
  bool dot;              // unit and counit vertices
};

struct Segment {
  double x1, y1, x2, y2;
};

struct Band {
  double x1, x2, y1, y2;
  std::string fill;
};

struct Label {
  double x, y;
  std::string text;
};

struct Layout {
  double width = 0, height = 0;
  std::vector<Band> bands;
  std::vector<Segment> strands;
  std::vector<Node> nodes;
  std::vector<Label> labels;
};

double strand_x(std::size_t j) { return kMargin + (static_cast<double>(j) + 1) * kDx; }
double row_y(std::size_t i) { return kMargin + kDy / 2 + static_cast<double>(i) * kDy; }

std::string short_label(const GenTwoCell& g, bool& dot, std::string& fill) {
  dot = false;
  fill = "#ffffff";
  switch (g.kind) {
    case GenKind::Chi: return "iso";
    case GenKind::Eta: dot = true; return "eta " + g.name;
    case GenKind::Eps: dot = true; return "eps " + g.name;
    case GenKind::BCbar: return "BCbar " + g.name;
    case GenKind::Descent: return g.name;
    case GenKind::Macro:
      fill = "#a8d5a2";
      return g.params.empty() ? g.name : g.name + " " + g.params.front();
  }
  return g.str();
}

Layout layout(const Signature& sig, const Diagram& d) {
  Layout L;
  auto bnds = boundaries(sig, d);
  std::size_t widest = 0;
  for (const auto& b : bnds) widest = std::max(widest, b.size());
  L.width = 2 * kMargin + (static_cast<double>(widest) + 1) * kDx;
  L.height = 2 * kMargin + static_cast<double>(bnds.size()) * kDy;

  for (std::size_t i = 0; i < bnds.size(); ++i) {
    const OneCellPath& p = bnds[i];
    double y1 = row_y(i) - kDy / 2, y2 = row_y(i) + kDy / 2;
    for (std::size_t j = 0; j <= p.size(); ++j) {
      double x1 = j == 0 ? 0 : strand_x(j - 1);
      double x2 = j == p.size() ? L.width : strand_x(j);
      L.bands.push_back({x1, x2, y1, y2, fiber_colour(sig, fiber_at(sig, p, j))});
    }
  }
  const OneCellPath& top = bnds.front();
  for (std::size_t j = 0; j < top.size(); ++j)
    L.labels.push_back({strand_x(j), kMargin - 4, top.tokens[j].str()});
  const OneCellPath& bot = bnds.back();
  for (std::size_t j = 0; j < bot.size(); ++j)
    L.labels.push_back({strand_x(j), L.height - kMargin + 14, bot.tokens[j].str()});
  if (d.layers.empty())
    for (std::size_t j = 0; j < top.size(); ++j)
      L.strands.push_back({strand_x(j), kMargin, strand_x(j), L.height - kMargin});
  for (std::size_t j = 0; j < top.size() && !d.layers.empty(); ++j)
    L.strands.push_back({strand_x(j), kMargin, strand_x(j), row_y(0)});
  for (std::size_t j = 0; j < bot.size() && !d.layers.empty(); ++j)
    L.strands.push_back({strand_x(j), row_y(bnds.size() - 1), strand_x(j), L.height - kMargin});

  for (std::size_t i = 0; i < d.layers.size(); ++i) {
    const Layer& l = d.layers[i];
    std::size_t k = l.left.size();
    std::size_t s = bnds[i].size() - k - l.right.size();
    std::size_t t = bnds[i + 1].size() - k - l.right.size();
    double y1 = row_y(i), y2 = row_y(i + 1), ym = (y1 + y2) / 2;
    double sum = 0;
    for (std::size_t j = 0; j < s; ++j) sum += strand_x(k + j);
    for (std::size_t j = 0; j < t; ++j) sum += strand_x(k + j);
    double nx = s + t == 0 ? strand_x(k) - kDx / 2 : sum / static_cast<double>(s + t);
    Node n;
    n.label = short_label(l.gen, n.dot, n.fill);
    n.full = l.gen.str();
    n.x = nx;
    n.y = ym;
    n.half = n.dot ? 4 : std::max(12.0, 3.5 * static_cast<double>(n.label.size()));
    L.nodes.push_back(n);
    for (std::size_t j = 0; j < k; ++j) L.strands.push_back({strand_x(j), y1, strand_x(j), y2});
    for (std::size_t j = 0; j < l.right.size(); ++j)
      L.strands.push_back({strand_x(k + s + j), y1, strand_x(k + t + j), y2});
    for (std::size_t j = 0; j < s; ++j) L.strands.push_back({strand_x(k + j), y1, nx, ym});
    for (std::size_t j = 0; j < t; ++j) L.strands.push_back({nx, ym, strand_x(k + j), y2});

    // Neighbouring strands at the node's height must clear the node.
    double lo = k == 0 ? 0 : strand_x(k - 1);
    double hi = l.right.tokens.empty() ? L.width
                                : (strand_x(k + s) + strand_x(k + t)) / 2;
    if (n.x - n.half < lo - 1e-9 || n.x + n.half > hi + 1e-9)
      fail(ErrorCode::RelationViolated, "render: node " + n.full + " in layer " +
                                            std::to_string(i) + " overlaps a neighbouring strand");
  }
  return L;
}

std::string svg(const Layout& L, const std::string& title) {
  std::string o = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(L.width) +
                  "\" height=\"" + num(L.height) + "\" viewBox=\"0 0 " + num(L.width) + " " +
                  num(L.height) + "\">\n";
  if (!title.empty()) o += "<title>" + xml_escape(title) + "</title>\n";
  for (const auto& b : L.bands)
    o += "<rect x=\"" + num(b.x1) + "\" y=\"" + num(b.y1) + "\" width=\"" + num(b.x2 - b.x1) +
         "\" height=\"" + num(b.y2 - b.y1) + "\" fill=\"" + b.fill +
         "\" fill-opacity=\"0.4\" stroke=\"none\"/>\n";
  for (const auto& s : L.strands) {
    double ym = (s.y1 + s.y2) / 2;
    o += "<path d=\"M " + num(s.x1) + " " + num(s.y1) + " C " + num(s.x1) + " " + num(ym) +
         ", " + num(s.x2) + " " + num(ym) + ", " + num(s.x2) + " " + num(s.y2) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }
  for (const auto& n : L.nodes) {
    o += "<g><title>" + xml_escape(n.full) + "</title>";
    if (n.dot) {
      o += "<circle cx=\"" + num(n.x) + "\" cy=\"" + num(n.y) + "\" r=\"" + num(n.half) +
           "\" fill=\"black\"/>";
      o += "<text x=\"" + num(n.x + 7) + "\" y=\"" + num(n.y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"10\">" + xml_escape(n.label) + "</text>";
    } else {
      o += "<rect x=\"" + num(n.x - n.half) + "\" y=\"" + num(n.y - 9) + "\" width=\"" +
           num(2 * n.half) + "\" height=\"18\" rx=\"3\" fill=\"" + n.fill +
           "\" stroke=\"black\"/>";
      o += "<text x=\"" + num(n.x) + "\" y=\"" + num(n.y + 4) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
           xml_escape(n.label) + "</text>";
    }
    o += "</g>\n";
  }
  for (const auto& l : L.labels)
    o += "<text x=\"" + num(l.x) + "\" y=\"" + num(l.y) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         xml_escape(l.text) + "</text>\n";
  o += "</svg>\n";
  return o;
}

// TikZ coordinates: 1 unit = 40 px, y pointing down.
std::string pt(double x, double y) { return "(" + num(x / 40) + "," + num(-y / 40) + ")"; }

std::string tikz(const Layout& L, const std::string& title) {
  std::map<std::string, std::string> names;
  std::string defs, body;
  auto colour = [&](const std::string& hex) {
    auto it = names.find(hex);
    if (it != names.end()) return it->second;
    std::string n = "sc" + std::to_string(names.size());
    names[hex] = n;
    defs += "\\definecolor{" + n + "}{HTML}{" + hex.substr(1) + "}\n";
    return n;
  };
  for (const auto& b : L.bands)
    body += "\\fill[" + colour(b.fill) + "!40] " + pt(b.x1, b.y1) + " rectangle " +
            pt(b.x2, b.y2) + ";\n";
  for (const auto& s : L.strands) {
    double ym = (s.y1 + s.y2) / 2;
    body += "\\draw[thick] " + pt(s.x1, s.y1) + " .. controls " + pt(s.x1, ym) + " and " +
            pt(s.x2, ym) + " .. " + pt(s.x2, s.y2) + ";\n";
  }
  for (const auto& n : L.nodes) {
    if (n.dot) {
      body += "\\fill " + pt(n.x, n.y) + " circle (0.1);\n";
      body += "\\node[right,font=\\scriptsize] at " + pt(n.x + 4, n.y) + " {" +
              tex_escape(n.label) + "};\n";
    } else {
      body += "\\node[draw,rounded corners=0.5mm,fill=" + colour(n.fill) +
              ",font=\\scriptsize] at " + pt(n.x, n.y) + " {" + tex_escape(n.label) + "};\n";
    }
  }
  for (const auto& l : L.labels)
    body += "\\node[font=\\scriptsize] at " + pt(l.x, l.y) + " {" + tex_escape(l.text) + "};\n";
  std::string o;
  if (!title.empty()) o += "% " + title + "\n";
  o += defs + "\\begin{tikzpicture}\n" + body + "\\end{tikzpicture}\n";
  return o;
}

}  // namespace

RenderFormat render_format_from_name(const std::string& s) {
  if (s == "svg") return RenderFormat::Svg;
  if (s == "tikz") return RenderFormat::Tikz;
  fail(ErrorCode::ParseError, "unknown render format " + s);
}

std::string fiber_colour(const Signature& sig, const FiberSym& s) {
  static const std::map<std::string, std::string> named{
      {"B", "#b5525c"}, {"Q", "#6a5acd"}, {"A", "#9caf88"}, {"R", "#474a51"}};
  static const std::vector<std::string> extra{"#d4a373", "#4a90a4", "#c97b84", "#7a9e7e",
                                              "#8e7cc3", "#e0b040", "#5c7aa8", "#a0522d"};
  if (s.terminal) return "#f0ead6";
  auto it = named.find(s.obj);
  if (it != named.end()) return it->second;
  const auto& objs = sig.b().objects();
  std::size_t i = std::find(objs.begin(), objs.end(), s.obj) - objs.begin();
  return extra[i % extra.size()];
}

std::string render(const Signature& sig, const Diagram& d, RenderFormat fmt,
                   const std::string& title) {
  Layout L = layout(sig, d);
  return fmt == RenderFormat::Svg ? svg(L, title) : tikz(L, title);
}

}  // namespace sc
