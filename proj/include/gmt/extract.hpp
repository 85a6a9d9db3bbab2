#pragma once

#include "gmt/boundary.hpp"
#include "gmt/voxel_set.hpp"

namespace gmt {

/// Reduced boundary of a voxel set.
///
/// With smoothing == 0 the raw cell faces between set and empty cells are
/// returned. Otherwise the indicator is convolved with a Gaussian of standard
/// deviation `smoothing`, truncated at three deviations and renormalized, and
/// the 0.5 level set of the cell-center samples is traced:
///   - n = 2: marching squares; a saddle square joins the two corners whose
///     sign matches the bilinear center value (mean of the four corners);
///   - n = 3: marching tetrahedra on the six-tetrahedron split of each cube
///     along its main diagonal, which needs no ambiguity table.
/// Facet normals are -grad u / |grad u| of the mollified field u, with the
/// nodal central-difference gradients interpolated multilinearly to the
/// facet centroid.
///
/// Empty or full sets give an empty patch flagged degenerate. Throws
/// InputError unless 0 <= smoothing <= 4h.
BoundaryPatch extract_boundary(const VoxelSet& v, double smoothing);

}  // namespace gmt
