#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pwret/frames.hpp"
#include "pwret/grid.hpp"
#include "pwret/measurement.hpp"
#include "pwret/signal.hpp"
#include "pwret/types.hpp"

namespace pwret::io {

/// All numeric serialization goes through these two. %.17g guarantees a
/// binary-exact double round trip, so write/read/write is byte identical.
std::string format_double(double v);
double parse_double(const std::string& text);

/// Key/value signal record:
///   T = <double>
///   J = <int>
///   coefficients = <re>,<im> <re>,<im> ...   (ascending j)
std::string write_signal(const TimeLimitedSignal& x);
TimeLimitedSignal read_signal(std::istream& in);

/// Frame record: K and M lines, then one `vector = re,im re,im ...` per
/// member.
std::string write_frame(const FrameFamily& frame);
FrameFamily read_frame(std::istream& in);

/// Grid CSV: header `n,k,lambda_re,lambda_im`, one row per (block, position).
std::string write_grid_csv(const InterpolationGrid& grid);

/// Measurement container: `#`-prefixed metadata header (grid, frame, noise,
/// augmentation) followed by a `n,m,c` CSV body. Round trips bit exactly.
std::string write_measurements(const MeasurementSet& ms);
MeasurementSet read_measurements(std::istream& in);

/// Resolved transform values: header `lambda_re,lambda_im,value_re,value_im`,
/// one row per resolved grid point in index order.
std::string write_fourier_values_csv(const InterpolationGrid& grid,
                                     std::span<const Complex> values,
                                     const std::vector<bool>& resolved);

}  // namespace pwret::io
