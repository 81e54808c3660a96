#ifndef OPUC_CLI_COMMANDS_HPP
#define OPUC_CLI_COMMANDS_HPP

#include "opuc/poly.hpp"
#include "opuc/szego.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace opuc::cli {

using json = nlohmann::ordered_json;

struct Options {
    std::string alphas;
    std::optional<double> theta;
    std::vector<double> a{-3, -2, -1, 0, 1, 2, 3};
    std::vector<double> b{-3, -2, -1, 0, 1, 2, 3};
    std::vector<int> n;
    int k = 4;
    std::optional<int> s;
    int m = 2;
    std::optional<int> grid;
    std::optional<double> tol;
    std::uint64_t seed = 42;
    int p = 4;
    std::string z;
    std::string w;
    double t = 0.1;
    std::string format = "json";
    std::string out;
    bool experimental_neg_edge = false;
    int sigma_sign = -1;
    bool timing = false;
    bool debug_wrong_psi = false;
};

/// What a command produces: the JSON result plus the table used for CSV.
struct Report {
    json result;
    json tolerances = json::object();
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    int exit_code = 0;
};

Report cmd_bands(const Options& o);
Report cmd_singular(const Options& o);
Report cmd_universality(const Options& o);
Report cmd_kernel(const Options& o);
Report cmd_schur(const Options& o);
Report cmd_identity(const Options& o);
Report cmd_verify(const Options& o);

// Formatting shared by the commands.
double round_sig12(double x);
/// Angle wrapped to [0, 2pi) with 12 significant digits.
double angle_out(double theta);
json complex_out(cplx c);
json alphas_out(const std::vector<cplx>& a);
std::string csv_num(double x);
std::string csv_angle(double theta);

/// "re,im", "re" or "[re, im]".
cplx parse_complex(const std::string& text, const char* what);

} // namespace opuc::cli

#endif // OPUC_CLI_COMMANDS_HPP
