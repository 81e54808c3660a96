#include "opuc_cli/cli.hpp"

#include "commands.hpp"

#include "opuc/errors.hpp"
#include "opuc/version.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace opuc::cli {

namespace {

using Command = std::function<Report(const Options&)>;

struct Raw {
    double theta = 0.0;
    int s = 0;
    int grid = 0;
    double tol = 0.0;
};

void add_shared(CLI::App* sub, Options& o, Raw& raw)
{
    sub->add_option("--alphas", o.alphas, "Verblunsky period: inline JSON or a file path");
    sub->add_option("--theta", raw.theta, "Angle in radians");
    sub->add_option("--a", o.a, "Real a values of the scaling grid")->delimiter(',');
    sub->add_option("--b", o.b, "Real b values of the scaling grid")->delimiter(',');
    sub->add_option("--n", o.n, "Degree list")->delimiter(',');
    sub->add_option("--k", o.k, "Number of periods")->capture_default_str();
    sub->add_option("--s", raw.s, "Offset within the period");
    sub->add_option("--m", o.m, "Period multiple for the rescaling identity")->capture_default_str();
    sub->add_option("--grid", raw.grid, "Grid size (band scan, singular scan or Schur grid)");
    sub->add_option("--tol", raw.tol, "Tolerance override");
    sub->add_option("--seed", o.seed, "Seed for randomized runs")->capture_default_str();
    sub->add_option("--p", o.p, "Period of the random V used by verify")->capture_default_str();
    sub->add_option("--z", o.z, "Complex point \"re,im\"");
    sub->add_option("--w", o.w, "Second complex point \"re,im\"");
    sub->add_option("--t", o.t, "Generating function variable")->capture_default_str();
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--out", o.out, "Write the report to this path");
    sub->add_flag("--experimental-neg-edge", o.experimental_neg_edge,
                  "Allow Delta = -2 edges through the rotated period");
    sub->add_option("--sigma-sign", o.sigma_sign, "Sign of the edge scaling sigma_n")
        ->check(CLI::IsMember({-1, 1}))
        ->capture_default_str();
    sub->add_flag("--timing", o.timing, "Add wall-clock time (the report is then not byte-stable)");
    sub->add_flag("--debug-wrong-psi", o.debug_wrong_psi,
                  "Build psi with the monic scaling (to see consistency checks fail)");
}

json config_echo(const std::string& name, const Options& o)
{
    json c = {{"command", name}};
    if (!o.alphas.empty())
        c["alphas"] = alphas_out(load_alphas(o.alphas).alphas());
    if (o.theta)
        c["theta"] = *o.theta;
    c["a"] = o.a;
    c["b"] = o.b;
    c["n"] = o.n;
    c["k"] = o.k;
    if (o.s)
        c["s"] = *o.s;
    c["m"] = o.m;
    if (o.grid)
        c["grid"] = *o.grid;
    if (o.tol)
        c["tol"] = *o.tol;
    c["seed"] = o.seed;
    c["p"] = o.p;
    if (!o.z.empty())
        c["z"] = o.z;
    if (!o.w.empty())
        c["w"] = o.w;
    c["t"] = o.t;
    c["format"] = o.format;
    c["experimental_neg_edge"] = o.experimental_neg_edge;
    c["sigma_sign"] = o.sigma_sign;
    c["debug_wrong_psi"] = o.debug_wrong_psi;
    return c;
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string render(const json& doc, const Report& r, const std::string& format)
{
    if (format == "json")
        return doc.dump(2) + "\n";
    std::ostringstream s;
    for (const char* key : {"command", "version", "config", "tolerances", "timing"})
        if (doc.contains(key))
            s << "# " << key << ": " << doc.at(key).dump() << "\n";
    for (std::size_t i = 0; i < r.header.size(); ++i)
        s << (i ? "," : "") << r.header[i];
    s << "\n";
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            s << (i ? "," : "") << csv_escape(row[i]);
        s << "\n";
    }
    return s.str();
}

int execute(const std::string& name, const Command& cmd, const Options& o, std::ostream& out)
{
    const auto t0 = std::chrono::steady_clock::now();
    const json config = config_echo(name, o);
    const Report r = cmd(o);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json doc = {{"command", name}, {"version", kVersion}, {"config", config},
                {"tolerances", r.tolerances}};
    if (o.timing)
        doc["timing"] = {{"wall_seconds", seconds}};
    doc["result"] = r.result;
    const std::string text = render(doc, r, o.format);

    if (o.out.empty()) {
        out << text;
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f)
            throw ArgumentError("--out: cannot open '" + o.out + "' for writing");
        f << text;
        if (!f)
            throw NumericError("--out: write to '" + o.out + "' failed");
    }
    return r.exit_code;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Periodic Verblunsky coefficients: bands, kernels and identities", "opuc"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    const std::map<std::string, std::pair<Command, const char*>> commands{
        {"bands", {cmd_bands, "Bands, edges, closed gaps, resonances and the equilibrium CDF"}},
        {"singular", {cmd_singular, "Singular points of the Szego limit functions"}},
        {"universality", {cmd_universality, "Christoffel-Darboux ratios against the limit kernel"}},
        {"kernel", {cmd_kernel, "Christoffel-Darboux kernel: closed form against the direct sum"}},
        {"schur", {cmd_schur, "Schur and Caratheodory functions and Wall polynomials"}},
        {"identity", {cmd_identity, "Generating function, period rescaling and zero classification"}},
        {"verify", {cmd_verify, "Run the property suite on a given or random period"}},
    };

    Options o;
    Raw raw;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, entry] : commands)
        subs[name] = app.add_subcommand(name, entry.second);
    for (auto& [name, sub] : subs)
        add_shared(sub, o, raw);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kValidation;
    }

    for (const auto& [name, sub] : subs) {
        if (!sub->parsed())
            continue;
        if (sub->count("--theta"))
            o.theta = raw.theta;
        if (sub->count("--s"))
            o.s = raw.s;
        if (sub->count("--grid"))
            o.grid = raw.grid;
        if (sub->count("--tol"))
            o.tol = raw.tol;
        try {
            return execute(name, commands.at(name).first, o, out);
        } catch (const ArgumentError& e) {
            err << "validation error: " << e.what() << "\n";
            return kValidation;
        } catch (const DomainError& e) {
            err << "validation error: " << e.what() << "\n";
            return kValidation;
        } catch (const UnsupportedCase& e) {
            err << "unsupported case: " << e.what() << "\n";
            return kUnsupported;
        } catch (const PropertyViolation& e) {
            err << "property failure: " << e.what() << "\n";
            return kPropertyFailure;
        } catch (const NumericError& e) {
            err << "numeric failure: " << e.what() << "\n";
            return kNumeric;
        } catch (const ConsistencyError& e) {
            err << "numeric failure: " << e.what() << "\n";
            return kNumeric;
        } catch (const nlohmann::json::exception& e) {
            err << "validation error: " << e.what() << "\n";
            return kValidation;
        }
    }
    return kValidation;
}

} // namespace opuc::cli
