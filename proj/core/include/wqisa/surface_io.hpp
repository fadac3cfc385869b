#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "wqisa/mba.hpp"
#include "wqisa/spline_surface.hpp"

namespace wqisa {

// Surfaces are stored as self-describing JSON:
//
//   {"format": "wqisa-spline", "version": 1, "degree": [px, py],
//    "knots_x": [...], "knots_y": [...], "coefficients": [[c_00, c_01, ...], ...]}
//
// coefficients[i][j] multiplies B_i(x) B_j(y). Doubles are written in shortest
// round-trip form, so a reloaded surface evaluates bit-identically.
// MBA surfaces use {"format": "wqisa-mba", "version": 1, "levels": [<spline>, ...]}.

std::string surface_to_json(const SplineSurface& surface, int indent = -1);
/// Throws ParseError on malformed JSON or a wrong format tag, InvalidArgument on
/// invalid knots or a coefficient grid of the wrong shape.
SplineSurface surface_from_json(std::string_view text);

std::string mba_to_json(const MbaSurface& surface, int indent = -1);
MbaSurface mba_from_json(std::string_view text);

void write_surface(const std::filesystem::path& path, const SplineSurface& surface);
SplineSurface read_surface(const std::filesystem::path& path);

}  // namespace wqisa
