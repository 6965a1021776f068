#ifndef DECLUTTER_IO_HPP
#define DECLUTTER_IO_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "declutter/geometry.hpp"

namespace declutter::io {

/**
 * Parses one point per row. Columns may be separated by commas and/or
 * whitespace; blank lines and lines starting with `#` are ignored.
 * NaN/Inf and ragged rows are rejected.
 */
PointCloud read_points(std::istream& in);
PointCloud read_points_file(const std::string& path);

/**
 * Parses an n-by-n distance matrix with the same lexical rules as `read_points`.
 */
PointCloud read_matrix(std::istream& in);
PointCloud read_matrix_file(const std::string& path);

std::vector<double> read_values_file(const std::string& path);

// Values are written in shortest round-trip form, so reloading is bit-exact.
void write_points(std::ostream& out, const PointCloud& cloud, std::span<const PointId> ids,
                  const std::string& header = {});
void write_points(std::ostream& out, const PointCloud& cloud, const std::string& header = {});
void write_points_file(const std::string& path, const PointCloud& cloud, std::span<const PointId> ids,
                       const std::string& header = {});
void write_points_file(const std::string& path, const PointCloud& cloud, const std::string& header = {});

void write_id_values(std::ostream& out, std::span<const PointId> ids, std::span<const double> values,
                     const std::string& value_name);

std::string format_double(double value);

}

#endif
