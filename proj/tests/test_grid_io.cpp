#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "isinggof/digest.hpp"
#include "isinggof/grid_io.hpp"
#include "isinggof/rng.hpp"
#include "support.hpp"

using namespace isinggof;

namespace {

Configuration random_grid(std::int64_t rows, std::int64_t cols, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(rows * cols));
    for (auto& c : cells) c = rng.uniform() < 0.4 ? 1 : 0;
    return Configuration(LatticeShape({rows, cols}), cells);
}

Configuration round_trip(const Configuration& config, GridFormat format, int threshold = 128) {
    std::stringstream buffer;
    write_grid_stream(config, buffer, format);
    GridReadOptions options;
    options.threshold = threshold;
    return read_grid_stream(buffer, format, options);
}

} // namespace

TEST_CASE("grid round trips are bit exact") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto config = random_grid(5 + seed, 9 - seed % 3, seed);
        for (const auto format : {GridFormat::text, GridFormat::csv, GridFormat::pgm}) {
            CHECK(round_trip(config, format) == config);
        }
    }
    // 1D configurations write as a single row and come back 1x N
    const Configuration line(LatticeShape({6}), {0, 1, 1, 0, 1, 0});
    const auto back = round_trip(line, GridFormat::text);
    CHECK(back.shape().dims == std::vector<std::int64_t>{1, 6});
    CHECK(back.cells() == line.cells());
}

TEST_CASE("text grid parsing") {
    std::stringstream good("010\n110\n");
    const auto config = read_grid_stream(good, GridFormat::text);
    CHECK(config.shape().dims == std::vector<std::int64_t>{2, 3});
    CHECK(config.t1() == 3);
    // file row r, column c -> site r + c*rows
    CHECK(config.occupied(0 + 1 * 2));
    CHECK(config.occupied(1 + 0 * 2));
    CHECK(config.occupied(1 + 1 * 2));

    std::stringstream empty("");
    const auto nothing = read_grid_stream(empty, GridFormat::text);
    CHECK(nothing.t1() == 0);
    CHECK(nothing.t2() == 0);

    std::stringstream bad("01\n0x\n");
    try {
        read_grid_stream(bad, GridFormat::text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_number == 2);
    }

    std::stringstream ragged("01\n011\n");
    CHECK_THROWS_AS(read_grid_stream(ragged, GridFormat::text), ParseError);
}

TEST_CASE("csv parsing accepts spaces and rejects junk") {
    std::stringstream good("0, 1, 1\n1, 0, 0\n");
    const auto config = read_grid_stream(good, GridFormat::csv);
    CHECK(config.shape().dims == std::vector<std::int64_t>{2, 3});
    CHECK(config.t1() == 3);

    std::stringstream bad("0,2\n");
    CHECK_THROWS_AS(read_grid_stream(bad, GridFormat::csv), ParseError);
}

TEST_CASE("pgm parsing") {
    // ascii with comments
    std::stringstream p2("P2\n# a comment\n3 2\n255\n0 200 0\n255 0 9\n");
    const auto config = read_grid_stream(p2, GridFormat::pgm);
    CHECK(config.shape().dims == std::vector<std::int64_t>{2, 3});
    CHECK(config.t1() == 2); // 200 and 255 pass the default threshold

    std::stringstream p2b("P2\n3 2\n255\n0 200 0\n255 0 9\n");
    GridReadOptions low;
    low.threshold = 5;
    CHECK(read_grid_stream(p2b, GridFormat::pgm, low).t1() == 3);

    // binary, 16-bit big endian
    std::stringstream p5;
    p5 << "P5\n2 1\n65535\n";
    p5.put(static_cast<char>(0x01));
    p5.put(static_cast<char>(0x00)); // 256 -> 1
    p5.put(static_cast<char>(0x00));
    p5.put(static_cast<char>(0x7f)); // 127 -> 0
    CHECK(read_grid_stream(p5, GridFormat::pgm).t1() == 1);

    std::stringstream bad("P3\n1 1\n255\n0\n");
    CHECK_THROWS_AS(read_grid_stream(bad, GridFormat::pgm), ParseError);
    std::stringstream truncated("P5\n4 4\n255\nxx");
    CHECK_THROWS_AS(read_grid_stream(truncated, GridFormat::pgm), ParseError);
}

TEST_CASE("format detection") {
    CHECK(detect_format("mask.pgm") == GridFormat::pgm);
    CHECK(detect_format("MASK.PNM") == GridFormat::pgm);
    CHECK(detect_format("grid.csv") == GridFormat::csv);
    CHECK(detect_format("grid.txt") == GridFormat::text);
    CHECK(detect_format("no_extension") == GridFormat::text);
}

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // block-boundary padding
    CHECK(sha256_hex(std::string(64, 'a')) ==
          "ffe054fe7ae0cb6dc65c3af9b61d5209f439851db43d0ba5997337df154668eb");
}
