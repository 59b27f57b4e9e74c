#pragma once

// Direct floating-point intersection arithmetic; the 1.7x rescale policy
// quantizes intersection points to ~1e-7 which breaks the area tolerance.
#define BOOST_GEOMETRY_NO_ROBUSTNESS

// Internal adapter between umbra types and the Boost.Geometry boolean
// kernel. Not installed; include from src/ only.

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include "umbra/geometry.hpp"

namespace umbra::bgx {

namespace bg = boost::geometry;

using BPoint = bg::model::d2::point_xy<double>;
using BRing = bg::model::ring<BPoint, false, true>;  // ccw, closed
using BPoly = bg::model::polygon<BPoint, false, true>;
using BMulti = bg::model::multi_polygon<BPoly>;

inline double snap(double v) { return std::round(v / kSnapGrid) * kSnapGrid; }

BPoly to_bpoly(const Polygon& p);
BMulti to_multi(const RegionSet& r);

/// Converts a boolean-kernel result back into disjoint simple polygons:
/// snaps coordinates, drops slivers below kAreaEps, fills sliver holes,
/// and splits polygons with remaining holes into hole-free pieces.
RegionSet from_multi(const BMulti& m);

}  // namespace umbra::bgx
