#include "isinggof/grid_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace isinggof {

namespace {

Configuration from_rows(const std::vector<std::vector<std::uint8_t>>& rows, BoundaryMode boundary) {
    if (rows.empty()) {
        // An empty file is read as the 1x1 all-zero grid so `stats` can
        // still report T1=0 T2=0.
        return Configuration(LatticeShape({1, 1}, boundary));
    }
    const auto height = static_cast<std::int64_t>(rows.size());
    const auto width = static_cast<std::int64_t>(rows.front().size());
    LatticeShape shape({height, width}, boundary);
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(height * width), 0);
    for (std::int64_t r = 0; r < height; ++r) {
        for (std::int64_t c = 0; c < width; ++c) {
            // first axis fastest: site = r + c*height
            cells[static_cast<std::size_t>(r + c * height)] =
                rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
    }
    return Configuration(std::move(shape), std::move(cells));
}

Configuration read_text(std::istream& in, const GridReadOptions& options) {
    std::vector<std::vector<std::uint8_t>> rows;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::uint8_t> row;
        row.reserve(line.size());
        for (char ch : line) {
            if (ch == '0') {
                row.push_back(0);
            } else if (ch == '1') {
                row.push_back(1);
            } else {
                throw ParseError(std::string("unexpected character '") + ch + "' in grid", line_no);
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("grid rows have different lengths", line_no);
        }
        rows.push_back(std::move(row));
    }
    return from_rows(rows, options.boundary);
}

Configuration read_csv(std::istream& in, const GridReadOptions& options) {
    std::vector<std::vector<std::uint8_t>> rows;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::uint8_t> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            field.erase(std::remove_if(field.begin(), field.end(),
                                       [](unsigned char c) { return std::isspace(c); }),
                        field.end());
            if (field == "0") {
                row.push_back(0);
            } else if (field == "1") {
                row.push_back(1);
            } else {
                throw ParseError("CSV cell must be 0 or 1, got '" + field + "'", line_no);
            }
        }
        if (row.empty()) throw ParseError("empty CSV row", line_no);
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("CSV rows have different lengths", line_no);
        }
        rows.push_back(std::move(row));
    }
    return from_rows(rows, options.boundary);
}

/// Reads the next whitespace/comment-delimited PGM header token.
std::string pgm_token(std::istream& in, long& line_no) {
    std::string token;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '\n') ++line_no;
        if (ch == '#') { // comment to end of line
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            if (ch == '\n') ++line_no;
            continue;
        }
        if (std::isspace(ch)) {
            if (!token.empty()) return token;
            continue;
        }
        token.push_back(static_cast<char>(ch));
    }
    if (token.empty()) throw ParseError("truncated PGM header", line_no);
    return token;
}

long pgm_number(std::istream& in, long& line_no) {
    const std::string tok = pgm_token(in, line_no);
    for (char c : tok) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ParseError("expected a number in PGM header, got '" + tok + "'", line_no);
        }
    }
    return std::stol(tok);
}

Configuration read_pgm(std::istream& in, const GridReadOptions& options) {
    long line_no = 1;
    const std::string magic = pgm_token(in, line_no);
    if (magic != "P2" && magic != "P5") {
        throw ParseError("not a PGM file (magic '" + magic + "')", line_no);
    }
    const long width = pgm_number(in, line_no);
    const long height = pgm_number(in, line_no);
    const long maxval = pgm_number(in, line_no);
    if (width < 1 || height < 1) throw ParseError("PGM dimensions must be positive", line_no);
    if (maxval < 1 || maxval > 65535) throw ParseError("PGM maxval out of range", line_no);

    std::vector<std::vector<std::uint8_t>> rows(
        static_cast<std::size_t>(height),
        std::vector<std::uint8_t>(static_cast<std::size_t>(width), 0));

    auto classify = [&](long value) -> std::uint8_t {
        if (value < 0 || value > maxval) {
            throw ParseError("PGM pixel value out of range", line_no);
        }
        return value >= options.threshold ? 1 : 0;
    };

    if (magic == "P2") {
        for (long r = 0; r < height; ++r) {
            for (long c = 0; c < width; ++c) {
                rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                    classify(pgm_number(in, line_no));
            }
        }
    } else {
        // single whitespace byte after maxval, then raw data
        const int bytes = maxval > 255 ? 2 : 1;
        for (long r = 0; r < height; ++r) {
            for (long c = 0; c < width; ++c) {
                long value = 0;
                for (int b = 0; b < bytes; ++b) {
                    const int ch = in.get();
                    if (ch == EOF) throw ParseError("truncated PGM pixel data", line_no);
                    value = (value << 8) | ch;
                }
                rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = classify(value);
            }
        }
    }
    return from_rows(rows, options.boundary);
}

struct RowsView {
    const Configuration* config;
    std::int64_t height;
    std::int64_t width;

    explicit RowsView(const Configuration& c) : config(&c) {
        const auto& dims = c.shape().dims;
        if (dims.size() == 1) {
            height = 1;
            width = dims[0];
        } else if (dims.size() == 2) {
            height = dims[0];
            width = dims[1];
        } else {
            throw ValidationError("grid files support 1D and 2D lattices only");
        }
    }

    bool at(std::int64_t r, std::int64_t c) const { return config->occupied(r + c * height); }
};

} // namespace

GridFormat detect_format(const std::string& path) {
    const auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == "pgm" || ext == "pnm") return GridFormat::pgm;
    if (ext == "csv") return GridFormat::csv;
    return GridFormat::text;
}

Configuration read_grid_stream(std::istream& in, GridFormat format,
                               const GridReadOptions& options) {
    switch (format) {
        case GridFormat::text:
            return read_text(in, options);
        case GridFormat::csv:
            return read_csv(in, options);
        case GridFormat::pgm:
            return read_pgm(in, options);
        case GridFormat::auto_detect:
            break;
    }
    throw ValidationError("grid format must be resolved before reading a stream");
}

Configuration read_grid(const std::string& path, const GridReadOptions& options) {
    GridFormat format = options.format;
    if (format == GridFormat::auto_detect) format = detect_format(path);
    std::ifstream in(path, format == GridFormat::pgm ? std::ios::binary : std::ios::in);
    if (!in) throw ParseError("cannot open '" + path + "' for reading");
    return read_grid_stream(in, format, options);
}

void write_grid_stream(const Configuration& config, std::ostream& out, GridFormat format) {
    const RowsView view(config);
    switch (format) {
        case GridFormat::text:
            for (std::int64_t r = 0; r < view.height; ++r) {
                for (std::int64_t c = 0; c < view.width; ++c) {
                    out << (view.at(r, c) ? '1' : '0');
                }
                out << '\n';
            }
            return;
        case GridFormat::csv:
            for (std::int64_t r = 0; r < view.height; ++r) {
                for (std::int64_t c = 0; c < view.width; ++c) {
                    if (c) out << ',';
                    out << (view.at(r, c) ? '1' : '0');
                }
                out << '\n';
            }
            return;
        case GridFormat::pgm:
            out << "P5\n" << view.width << ' ' << view.height << "\n255\n";
            for (std::int64_t r = 0; r < view.height; ++r) {
                for (std::int64_t c = 0; c < view.width; ++c) {
                    out.put(view.at(r, c) ? static_cast<char>(255) : static_cast<char>(0));
                }
            }
            return;
        case GridFormat::auto_detect:
            break;
    }
    throw ValidationError("grid format must be resolved before writing");
}

void write_grid(const Configuration& config, const std::string& path, GridFormat format) {
    if (format == GridFormat::auto_detect) format = detect_format(path);
    std::ofstream out(path, format == GridFormat::pgm ? std::ios::binary : std::ios::out);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    write_grid_stream(config, out, format);
    if (!out) throw ParseError("write to '" + path + "' failed");
}

} // namespace isinggof
