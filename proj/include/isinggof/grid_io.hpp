#pragma once

#include <iosfwd>
#include <string>

#include "isinggof/lattice.hpp"

namespace isinggof {

/// Supported binary-grid file formats:
///  - text: one row per line, characters {0,1}
///  - csv:  one row per line, comma-separated {0,1}
///  - pgm:  P2/P5 portable graymap; pixels >= threshold map to 1
/// File rows become lattice axis 1 (so a file with H lines of width W loads
/// as an H x W lattice), matching the documented cell ordering.
enum class GridFormat { auto_detect, text, csv, pgm };

struct GridReadOptions {
    GridFormat format = GridFormat::auto_detect;
    int threshold = 128;
    BoundaryMode boundary = BoundaryMode::free;
};

Configuration read_grid(const std::string& path, const GridReadOptions& options = {});
Configuration read_grid_stream(std::istream& in, GridFormat format,
                               const GridReadOptions& options = {});

/// Writes 1D/2D configurations. PGM output is P5 with maxval 255 and pixel
/// values {0, 255}, so reading back with the default threshold round-trips.
void write_grid(const Configuration& config, const std::string& path,
                GridFormat format = GridFormat::text);
void write_grid_stream(const Configuration& config, std::ostream& out, GridFormat format);

/// Resolves auto_detect from the file extension (.pgm/.pnm -> pgm,
/// .csv -> csv, otherwise text).
GridFormat detect_format(const std::string& path);

} // namespace isinggof
