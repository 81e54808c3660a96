#ifndef OPUC_CLI_CLI_HPP
#define OPUC_CLI_CLI_HPP

#include "opuc/poly.hpp"
#include "opuc/szego.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace opuc::cli {

enum ExitCode : int {
    kOk = 0,
    kPropertyFailure = 1,
    kValidation = 2,
    kNumeric = 3,
    kUnsupported = 4,
};

/// Parses a JSON array of [re, im] pairs (plain numbers are read as real).
/// Throws ArgumentError naming the offending entry.
std::vector<cplx> parse_alphas_json(const std::string& text);

/// `spec` is inline JSON when it starts with '[' or '{', otherwise a file
/// path. A file may hold the bare array or an object with an "alphas" key.
VerblunskyPeriod load_alphas(const std::string& spec);

/// Entry point shared by the executable and the tests. Reports go to `out`
/// (or to --out), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace opuc::cli

#endif // OPUC_CLI_CLI_HPP
