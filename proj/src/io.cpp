#include "declutter/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

namespace declutter::io {

namespace {

std::vector<std::vector<double>> read_rows(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::vector<double> row;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (p < end) {
            while (p < end && (*p == ',' || *p == ' ' || *p == '\t' || *p == '\r')) {
                ++p;
            }
            if (p == end) {
                break;
            }
            const char* token_end = p;
            while (token_end < end && *token_end != ',' && *token_end != ' ' && *token_end != '\t' &&
                   *token_end != '\r') {
                ++token_end;
            }
            // from_chars does not accept a leading '+'.
            const char* start = (*p == '+') ? p + 1 : p;
            double value = 0;
            auto [ptr, ec] = std::from_chars(start, token_end, value);
            if (ec != std::errc() || ptr != token_end) {
                throw Error("line " + std::to_string(line_no) + ": malformed number '" + std::string(p, token_end) +
                            "'");
            }
            if (!std::isfinite(value)) {
                throw Error("line " + std::to_string(line_no) + ": NaN/Inf values are not allowed");
            }
            row.push_back(value);
            p = token_end;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw Error("line " + std::to_string(line_no) + ": expected " + std::to_string(rows.front().size()) +
                        " columns, found " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw Error("no data rows found");
    }
    return rows;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "' for reading");
    }
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    return out;
}

}

std::string format_double(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

PointCloud read_points(std::istream& in) {
    return PointCloud::from_rows(read_rows(in));
}

PointCloud read_points_file(const std::string& path) {
    auto in = open_input(path);
    try {
        return read_points(in);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

PointCloud read_matrix(std::istream& in) {
    auto rows = read_rows(in);
    const std::size_t n = rows.size();
    if (rows.front().size() != n) {
        throw Error("distance matrix has " + std::to_string(n) + " rows but " + std::to_string(rows.front().size()) +
                    " columns");
    }
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& row : rows) {
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return PointCloud::from_distance_matrix(std::move(flat), n);
}

PointCloud read_matrix_file(const std::string& path) {
    auto in = open_input(path);
    try {
        return read_matrix(in);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

std::vector<double> read_values_file(const std::string& path) {
    auto in = open_input(path);
    auto rows = read_rows(in);
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& row : rows) {
        // Either "value" or "id,value" rows.
        values.push_back(row.back());
    }
    return values;
}

void write_points(std::ostream& out, const PointCloud& cloud, std::span<const PointId> ids,
                  const std::string& header) {
    if (!header.empty()) {
        out << "# " << header << '\n';
    }
    for (PointId id : ids) {
        auto p = cloud.point(id);
        for (std::size_t c = 0; c < p.size(); ++c) {
            if (c) {
                out << ',';
            }
            out << format_double(p[c]);
        }
        out << '\n';
    }
}

void write_points(std::ostream& out, const PointCloud& cloud, const std::string& header) {
    std::vector<PointId> ids(cloud.size());
    std::iota(ids.begin(), ids.end(), PointId{0});
    write_points(out, cloud, ids, header);
}

void write_points_file(const std::string& path, const PointCloud& cloud, std::span<const PointId> ids,
                       const std::string& header) {
    auto out = open_output(path);
    write_points(out, cloud, ids, header);
}

void write_points_file(const std::string& path, const PointCloud& cloud, const std::string& header) {
    auto out = open_output(path);
    write_points(out, cloud, header);
}

void write_id_values(std::ostream& out, std::span<const PointId> ids, std::span<const double> values,
                     const std::string& value_name) {
    out << "# id," << value_name << '\n';
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out << ids[i] << ',' << format_double(values[i]) << '\n';
    }
}

}
