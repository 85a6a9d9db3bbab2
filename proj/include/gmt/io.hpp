#pragma once

#include "gmt/poly_set.hpp"
#include "gmt/voxel_set.hpp"

#include <iosfwd>
#include <string>

namespace gmt {

/// GMTVOX1: a `GMTVOX1` line, a header line
/// `n=<2|3> dims=<d1,d2[,d3]> origin=<o1,o2[,o3]> spacing=<h>`, then one byte
/// (0x00 or 0x01) per cell, first axis fastest.
VoxelSet read_voxels(std::istream& in);
VoxelSet read_voxels_file(const std::string& path);
void write_voxels(std::ostream& out, const VoxelSet& v);
void write_voxels_file(const std::string& path, const VoxelSet& v);

/// Text polygon format: one `x,y` vertex per line, a blank line between
/// loops, `#` starts a comment.
PolyCurveSet read_poly(std::istream& in);
PolyCurveSet read_poly_file(const std::string& path);
void write_poly(std::ostream& out, const PolyCurveSet& s);

}  // namespace gmt
