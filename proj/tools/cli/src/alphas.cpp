#include "opuc_cli/cli.hpp"

#include "opuc/errors.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace opuc::cli {

using nlohmann::json;

std::vector<cplx> parse_alphas_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ArgumentError(std::string("alphas: malformed JSON: ") + e.what());
    }
    if (j.is_object()) {
        if (!j.contains("alphas"))
            throw ArgumentError("alphas: object has no \"alphas\" key");
        j = j.at("alphas");
    }
    if (!j.is_array() || j.empty())
        throw ArgumentError("alphas: expected a non-empty array of [re, im] pairs");
    std::vector<cplx> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& e = j[i];
        if (e.is_number()) {
            out.emplace_back(e.get<double>(), 0.0);
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
            out.emplace_back(e[0].get<double>(), e[1].get<double>());
        } else {
            throw ArgumentError("alphas: entry " + std::to_string(i) + " is not an [re, im] pair");
        }
    }
    return out;
}

VerblunskyPeriod load_alphas(const std::string& spec)
{
    const auto first = spec.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (spec[first] == '[' || spec[first] == '{'))
        return VerblunskyPeriod(parse_alphas_json(spec));
    std::ifstream in(spec);
    if (!in)
        throw ArgumentError("alphas: cannot open file '" + spec + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return VerblunskyPeriod(parse_alphas_json(buf.str()));
}

} // namespace opuc::cli
