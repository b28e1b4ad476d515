#pragma once

#include <iosfwd>
#include <string>

#include "fracmax/space.hpp"

namespace fracmax {

// Space file:
//   # truncation: <note>                       (optional)
//   mode=coords metric=euclidean|chebyshev dim=D cap=R [boundary=i,j,...]
//   <id> <x1> ... <xD> <weight>                 one line per point
// or
//   mode=matrix cap=R [boundary=...]
//   n rows of n distances, then one line of n weights.
// Other lines starting with '#' and blank lines are ignored. Ids must be
// 0..n-1 in order.
MetricMeasureSpace read_space(std::istream& in);
MetricMeasureSpace read_space_file(const std::string& path);
void write_space(std::ostream& out, const MetricMeasureSpace& space);
void write_space_file(const std::string& path, const MetricMeasureSpace& space);

// Field file: one `<id> <value>` line per point, ids 0..n-1 in order.
ScalarField read_field(std::istream& in, std::size_t expected_size);
ScalarField read_field_file(const std::string& path, std::size_t expected_size);
void write_field(std::ostream& out, std::span<const double> u);
void write_field_file(const std::string& path, std::span<const double> u);

// Shortest text that round-trips the double (%.17g), "inf"/"-inf"/"nan".
std::string format_double(double v);

}  // namespace fracmax
