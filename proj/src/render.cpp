#include "guillopack/render.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace guillopack {

namespace {

void collect_cuts(const GuillotineTree& t, int node, std::optional<Orientation> run, int stage,
                  std::vector<CutSegment>& out) {
  const auto& nd = t.node(node);
  if (nd.is_leaf()) return;
  int s = (!run || *run != *nd.cut) ? stage + 1 : stage;
  const Rect& r = nd.region;
  if (*nd.cut == Orientation::Horizontal) out.push_back({Orientation::Horizontal, nd.position, r.x0, r.x1, s});
  else out.push_back({Orientation::Vertical, nd.position, r.y0, r.y1, s});
  collect_cuts(t, nd.low, nd.cut, s, out);
  collect_cuts(t, nd.high, nd.cut, s, out);
}

bool crosses(const CutSegment& c, const Rect& r) {
  if (c.orientation == Orientation::Horizontal)
    return r.y0 < c.position && c.position < r.y1 && c.from < r.x1 && r.x0 < c.to;
  return r.x0 < c.position && c.position < r.x1 && c.from < r.y1 && r.y0 < c.to;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

SvgModel build_svg_model(const Packing& p, const GuillotineTree* tree, const PseudoGuillotineTree* comps) {
  SvgModel m;
  m.n = p.instance().side();
  m.items = p.placed();
  if (tree) {
    collect_cuts(*tree, tree->root(), std::nullopt, 0, m.cuts);
    for (const auto& c : m.cuts)
      for (const auto& it : m.items)
        if (crosses(c, it.rect))
          throw std::logic_error("cut at " + std::to_string(c.position) + " crosses item " +
                                 std::to_string(it.item.id));
  }
  if (comps) {
    for (const auto& c : compartments(*comps)) {
      if (const auto* b = std::get_if<BoxCompartment>(&c)) {
        const Rect& r = b->rect;
        m.outlines.push_back({{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}});
      } else {
        m.outlines.push_back(std::get<LCompartment>(c).vertices());
      }
    }
  }
  return m;
}

std::string render_svg(const SvgModel& m, const RenderStyle& style) {
  const double k = style.cell, pad = style.margin, size = static_cast<double>(m.n) * k;
  auto X = [&](Coord x) { return num(pad + static_cast<double>(x) * k); };
  auto Y = [&](Coord y) { return num(pad + size - static_cast<double>(y) * k); };  // y up
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(size + 2 * pad) << "\" height=\""
    << num(size + 2 * pad) << "\" viewBox=\"0 0 " << num(size + 2 * pad) << ' ' << num(size + 2 * pad) << "\">\n";
  o << "<rect x=\"" << X(0) << "\" y=\"" << Y(m.n) << "\" width=\"" << num(size) << "\" height=\"" << num(size)
    << "\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n";
  if (style.items) {
    o << "<g class=\"items\">\n";
    for (const auto& it : m.items) {
      const auto& r = it.rect;
      const auto& colour = style.palette[static_cast<std::size_t>(it.item.id) % style.palette.size()];
      o << "<rect x=\"" << X(r.x0) << "\" y=\"" << Y(r.y1) << "\" width=\"" << num(r.width() * k)
        << "\" height=\"" << num(r.height() * k) << "\" fill=\"" << colour
        << "\" fill-opacity=\"0.7\" stroke=\"#222\" stroke-width=\"1\"/>\n";
      if (style.labels && r.width() * k >= 12 && r.height() * k >= 10)
        o << "<text x=\"" << num(pad + (r.x0 + r.x1) * k / 2) << "\" y=\"" << num(pad + size - (r.y0 + r.y1) * k / 2)
          << "\" font-size=\"10\" text-anchor=\"middle\" dominant-baseline=\"middle\">" << it.item.id << "</text>\n";
    }
    o << "</g>\n";
  }
  if (style.compartments && !m.outlines.empty()) {
    o << "<g class=\"compartments\" fill=\"none\" stroke=\"#555\" stroke-width=\"1.5\" stroke-dasharray=\"2 2\">\n";
    for (const auto& poly : m.outlines) {
      o << "<polygon points=\"";
      for (std::size_t i = 0; i < poly.size(); ++i) o << (i ? " " : "") << X(poly[i].first) << ',' << Y(poly[i].second);
      o << "\"/>\n";
    }
    o << "</g>\n";
  }
  if (style.cuts && !m.cuts.empty()) {
    static const char* stage_colour[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#17becf"};
    o << "<g class=\"cuts\">\n";
    for (const auto& c : m.cuts) {
      std::string colour = style.stages ? stage_colour[(c.stage - 1) % 6] : "#d62728";
      std::string dash = style.stages && c.stage > 1 ? " stroke-dasharray=\"" + std::to_string(2 + c.stage) + " 3\"" : "";
      bool h = c.orientation == Orientation::Horizontal;
      o << "<line x1=\"" << X(h ? c.from : c.position) << "\" y1=\"" << Y(h ? c.position : c.from) << "\" x2=\""
        << X(h ? c.to : c.position) << "\" y2=\"" << Y(h ? c.position : c.to) << "\" stroke=\"" << colour
        << "\" stroke-width=\"1.5\"" << dash << " data-stage=\"" << c.stage << "\"/>\n";
    }
    o << "</g>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string render_svg(const Packing& p, const GuillotineTree* tree, const PseudoGuillotineTree* comps,
                       const RenderStyle& style) {
  return render_svg(build_svg_model(p, tree, comps), style);
}

}  // namespace guillopack
