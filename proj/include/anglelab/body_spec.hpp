#pragma once

#include <string_view>

#include "anglelab/bodies.hpp"

namespace anglelab {

// Body-spec text grammar:
//
//   spec    := kind ':' params | 'steiner(' 'u=' list '|' spec ')'
//   kind    := ball | box | simplex | ellipsoid | hpoly | polygon
//   params  := key '=' list (',' key '=' list)*  |  '@' path
//   list    := number (';' number)*
//
//   ball:d=3,r=1   box:d=2,edges=1;1   simplex:d=4   ellipsoid:d=3,axes=1;2;3
//   hpoly:@file.json     [{"normal": [..], "offset": b}, ...]  (normal . x <= b)
//   polygon:@file.json   [[x, y], ...] counterclockwise
//   steiner(u=0;1|box:d=2,edges=1;1)   nests to any depth
//
// Omitted r, edges, and axes default to 1. Syntax errors throw ParseError with
// the character position; semantic errors throw ValidationError.
BodySpec parse_body_spec(std::string_view text);

// parse_body_spec followed by make_body.
BodyPtr parse_body(std::string_view text);

}  // namespace anglelab
