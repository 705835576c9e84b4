#include <doctest.h>

#include <sstream>
#include <vector>

#include "wbs2/core.hpp"
#include "wbs2/series_io.hpp"

using namespace wbs2;

namespace {

std::size_t error_line(const std::string& text, std::optional<std::size_t> col = {}) {
    std::istringstream in(text);
    try {
        read_series(in, col);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("one value per line") {
    std::istringstream in("# comment\n1.5\n\n-2\n  3e2 \n");
    CHECK(read_series(in) == std::vector<double>{1.5, -2, 300});
}

TEST_CASE("csv column with header") {
    std::istringstream in("time,value\n1,0.5\n2,0.25\n");
    CHECK(read_series(in, 2) == std::vector<double>{0.5, 0.25});
    std::istringstream plain("1,7\n2,8\n");
    CHECK(read_series(plain, 1) == std::vector<double>{1, 2});
}

TEST_CASE("series parse errors") {
    CHECK(error_line("1\n2\nfoo\n") == 3);
    CHECK(error_line("1\nnan\n") == 2);
    CHECK(error_line("1\n2 3\n") == 2);
    CHECK(error_line("a,b\n1,2\n3\n", 2) == 3);
    CHECK(error_line("a,b\n1,x\n", 2) == 2);
}

TEST_CASE("round trip keeps every bit") {
    const std::vector<double> v{0.1, 1.0 / 3.0, -2.5e-300, 12345.678};
    std::stringstream io;
    write_series(io, v);
    CHECK(read_series(io) == v);
}
