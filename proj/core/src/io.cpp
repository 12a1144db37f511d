#include "hdq/io.hpp"

#include "hdq/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

namespace hdq::io {

namespace {

using nlohmann::json;

json number(double v)
{
    // JSON has no infinities; keep them readable instead of emitting null.
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    return v;
}

double require_number(const json& doc, const char* key)
{
    const auto& v = doc.at(key);
    if (!v.is_number())
        throw Error(ErrorCode::precondition, std::string("config key '") + key + "' must be a number");
    return v.get<double>();
}

int require_int(const json& doc, const char* key)
{
    const auto& v = doc.at(key);
    if (!v.is_number_integer())
        throw Error(ErrorCode::precondition, std::string("config key '") + key + "' must be an integer");
    return v.get<int>();
}

} // namespace

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ModelParams parse_model_config(std::string_view json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::precondition, std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw Error(ErrorCode::precondition, "config must be a JSON object");

    const std::set<std::string> rates{"lambda1", "mu1", "lambda2", "mu2", "ell_d", "ell_u"};
    const std::set<std::string> ratios{"rho1", "rho2", "rho12", "ell_d", "ell_u"};
    std::set<std::string> keys;
    for (const auto& item : doc.items())
        keys.insert(item.key());

    if (keys == rates) {
        return ModelParams{require_number(doc, "lambda1"), require_number(doc, "mu1"), require_number(doc, "lambda2"),
                           require_number(doc, "mu2"), require_int(doc, "ell_d"), require_int(doc, "ell_u")};
    }
    if (keys == ratios) {
        const Ratios r{require_number(doc, "rho1"), require_number(doc, "rho2"), require_number(doc, "rho12")};
        return from_ratios(r, require_int(doc, "ell_d"), require_int(doc, "ell_u"));
    }
    throw Error(ErrorCode::precondition,
                "config must hold exactly {lambda1, mu1, lambda2, mu2, ell_d, ell_u} or {rho1, rho2, rho12, ell_d, ell_u}");
}

std::string distribution_csv(const DistributionTable& table)
{
    std::string out = "ell,k,prob\n";
    for (const auto& r : table.rows)
        out += std::to_string(r.ell) + "," + std::to_string(r.k) + "," + format_double(r.prob) + "\n";
    out += "tail,2," + format_double(table.tail_mass) + "\n";
    return out;
}

std::string distribution_json(const DistributionTable& table)
{
    json rows = json::array();
    for (const auto& r : table.rows)
        rows.push_back({{"ell", r.ell}, {"k", r.k}, {"prob", r.prob}});
    return json{{"rows", rows}, {"tail_mass", table.tail_mass}}.dump(2) + "\n";
}

std::string density_csv(const LimitLaw& law, std::span<const double> grid)
{
    std::string out = "x,f11,f21,f12,f22,f,F\n";
    for (double x : grid) {
        out += format_double(x);
        for (auto region : kAllRegions)
            out += "," + format_double(law.density(region, x));
        out += "," + format_double(law.density(x)) + "," + format_double(law.cdf(x)) + "\n";
    }
    return out;
}

std::string density_json(const LimitLaw& law, std::span<const double> grid)
{
    json rows = json::array();
    for (double x : grid) {
        rows.push_back({{"x", x},
                        {"f11", law.density(Region::S11, x)},
                        {"f21", law.density(Region::S21, x)},
                        {"f12", law.density(Region::S12, x)},
                        {"f22", law.density(Region::S22, x)},
                        {"f", law.density(x)},
                        {"F", law.cdf(x)}});
    }
    const auto& p = law.params();
    json out{{"params", {{"b1", p.b1}, {"b2", p.b2}, {"ell_d", p.ell_d}, {"ell_u", p.ell_u}, {"rho12", p.rho12}}},
             {"c0", law.c0()},
             {"mean", law.mean()},
             {"limit_sqrtn_pi0", law.limit_sqrtn_pi0()},
             {"rows", rows}};
    return out.dump(2) + "\n";
}

std::string study_csv(const StudyTable& table)
{
    std::string out;
    for (const auto& [k, v] : table.metadata)
        out += "# " + k + "=" + v + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out += (i ? "," : "") + table.columns[i];
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + format_double(row[i]);
        out += "\n";
    }
    return out;
}

std::string study_json(const StudyTable& table)
{
    json rows = json::array();
    for (const auto& row : table.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i)
            obj[table.columns[i]] = number(row[i]);
        rows.push_back(obj);
    }
    json meta = json::object();
    for (const auto& [k, v] : table.metadata)
        meta[k] = v;
    return json{{"columns", table.columns}, {"metadata", meta}, {"rows", rows}}.dump(2) + "\n";
}

std::string sim_result_json(const sim::SimResult& r)
{
    json regions = json::object();
    for (auto region : kAllRegions) {
        const int i = index_of(region);
        regions[std::string(to_string(region))] = {{"estimate", r.region_occupancy[i]}, {"ci_halfwidth", r.region_ci[i]}};
    }
    json out{{"time_avg_L", r.time_avg_L},
             {"ci_halfwidth", r.ci_halfwidth},
             {"p_empty", {{"estimate", r.empty.value}, {"ci_halfwidth", r.empty.ci_halfwidth}}},
             {"occupancy", r.occupancy},
             {"region_occupancy", regions},
             {"events", r.events},
             {"batch_mean_L", r.batch_mean_L}};
    return out.dump(2) + "\n";
}

std::string occupancy_csv(const sim::SimResult& r, int ell_d)
{
    std::string out = "ell,k,fraction\n";
    const std::size_t top = std::max(r.level1.size(), ell_d + r.level2.size());
    for (std::size_t l = 0; l < top; ++l) {
        if (l < r.level1.size())
            out += std::to_string(l) + ",1," + format_double(r.level1[l]) + "\n";
        if (l >= static_cast<std::size_t>(ell_d) && l - ell_d < r.level2.size())
            out += std::to_string(l) + ",2," + format_double(r.level2[l - ell_d]) + "\n";
    }
    return out;
}

void write_atomically(const std::string& path, std::string_view content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw Error(ErrorCode::precondition, "cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f)
            throw Error(ErrorCode::precondition, "write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::precondition, "cannot move output into place at " + path);
    }
}

} // namespace hdq::io
