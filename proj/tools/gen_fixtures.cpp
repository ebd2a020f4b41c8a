// Emits the built-in OEIS fixture header. Every term comes from the
// convolution route in multinomial_core; nothing here is typed in by hand.
//
// usage: gen_fixtures <output-header>

#include "multinom/multinomial_core.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

constexpr int fixture_terms = 20;

struct Registered {
    char const* id;
    int k;
};

constexpr Registered registered[] = {{"A002426", 1}, {"A005191", 2}, {"A025012", 3}};

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: gen_fixtures <output-header>\n";
        return 2;
    }
    std::ofstream out(argv[1]);
    if (!out) {
        std::cerr << "cannot open " << argv[1] << "\n";
        return 1;
    }
    out << "// Generated by tools/gen_fixtures.cpp. Do not edit.\n"
        << "#pragma once\n\n"
        << "#include <array>\n#include <cstdint>\n#include <string_view>\n\n"
        << "namespace multinom::fixtures {\n\n"
        << "inline constexpr std::size_t term_count = " << fixture_terms << ";\n\n"
        << "struct FixtureSequence {\n"
        << "    std::string_view oeis_id;\n"
        << "    std::int64_t k;\n"
        << "    std::int64_t offset;\n"
        << "    std::array<std::string_view, term_count> terms;\n"
        << "};\n\n"
        << "inline constexpr std::array<FixtureSequence, " << std::size(registered)
        << "> registered = {{\n";
    for (auto const& r : registered) {
        out << "    {\"" << r.id << "\", " << r.k << ", 0, {{";
        for (int n = 0; n < fixture_terms; ++n) {
            out << (n ? ", " : "") << '"' << multinom::central_coefficient({r.k, n}).str() << '"';
        }
        out << "}}},\n";
    }
    out << "}};\n\n}  // namespace multinom::fixtures\n";
    return out ? EXIT_SUCCESS : EXIT_FAILURE;
}
