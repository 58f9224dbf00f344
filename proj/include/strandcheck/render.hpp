#pragma once

#include <string>

#include "strandcheck/calculus.hpp"

namespace sc {

enum class RenderFormat { Svg, Tikz };
RenderFormat render_format_from_name(const std::string& s);

// Static drawing: boundaries as rows top to bottom, strands as vertical curves,
// generators as labelled nodes, regions filled by fiber. Output is a pure
// function of the inputs. Throws RelationViolated if a node would overlap a
// neighbouring strand.
std::string render(const Signature& sig, const Diagram& d, RenderFormat fmt,
                   const std::string& title = "");

// Fill colour (hex) of the region over a fiber.
std::string fiber_colour(const Signature& sig, const FiberSym& s);

}  // namespace sc
