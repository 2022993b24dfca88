#ifndef TWOSCVRP_RENDER_H_
#define TWOSCVRP_RENDER_H_

#include <string>
#include <vector>

#include "twoscvrp/instance.h"
#include "twoscvrp/solution.h"

namespace twoscvrp {

struct RenderOptions {
  double scale = 24;  // pixels per unit length
};

struct SvgFile {
  std::string name;  // file name, e.g. "pallet_J1.svg"
  std::string svg;
};

// One isometric drawing per used pallet and one top-down drawing per used
// truck. Solutions without placements get schematic drawings (volume bars
// and a pallet strip). Colours are keyed by item id, so output is stable.
std::vector<SvgFile> RenderSolution(const Instance& instance, const Solution& solution,
                                    const RenderOptions& options = {});

// "#rrggbb" derived from a hash of the id.
std::string ColorFor(const std::string& id);

}  // namespace twoscvrp

#endif  // TWOSCVRP_RENDER_H_
