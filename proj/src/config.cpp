#include "lifesurplus/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lifesurplus/errors.hpp"
#include "lifesurplus/mesh.hpp"

namespace lifesurplus {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw config_error("config field '" + path + "': " + what);
}

const json& need(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key))
        fail(path.empty() ? key : path + "." + key, "missing");
    return j.at(key);
}

double need_number(const json& j, const std::string& key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

RateCurve curve_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected a curve object");
    const std::string type = need(j, "type", path).get<std::string>();
    if (type == "constant") return RateCurve::constant(need_number(j, "rate", path));
    if (type == "makeham")
        return RateCurve::makeham(need_number(j, "a", path), need_number(j, "b", path),
                                  need_number(j, "c", path), need_number(j, "entry_age", path));
    if (type == "scaled")
        return RateCurve::scaled(curve_from_json(need(j, "base", path), path + ".base"),
                                 need_number(j, "factor", path));
    if (type == "shifted")
        return RateCurve::shifted(curve_from_json(need(j, "base", path), path + ".base"),
                                  need_number(j, "offset", path));
    if (type == "table") {
        const json& times = need(j, "times", path);
        const json& values = need(j, "values", path);
        if (!times.is_array() || !values.is_array()) fail(path, "times/values must be arrays");
        try {
            return RateCurve::table(times.get<std::vector<double>>(),
                                    values.get<std::vector<double>>());
        } catch (const std::domain_error& e) {
            fail(path, e.what());
        }
    }
    fail(path, "unknown curve type '" + type + "'");
}

CashflowDecl cashflows_from_json(const json& j, const std::string& path) {
    CashflowDecl d;
    const json& prem = need(j, "premium", path);
    if (!(prem.is_object() && prem.value("type", "") == "solve"))
        d.premium = curve_from_json(prem, path + ".premium");
    d.death_benefit = curve_from_json(need(j, "death_benefit", path), path + ".death_benefit");
    d.maturity_benefit = need_number(j, "maturity_benefit", path);
    d.term = need_number(j, "term", path);
    if (!(d.term > 0.0)) fail(path + ".term", "must be positive");
    if (j.contains("bonus_rate"))
        d.bonus_rate = curve_from_json(j.at("bonus_rate"), path + ".bonus_rate");
    return d;
}

int line_of_byte(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

}  // namespace

namespace {
RunConfig read_schema(const json& j);
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error("line " + std::to_string(line_of_byte(text, e.byte)) + ": " + e.what(),
                           line_of_byte(text, e.byte));
    }
    try {
        return read_schema(j);
    } catch (const json::exception& e) {
        throw config_error(std::string("malformed value: ") + e.what());
    }
}

namespace {

RunConfig read_schema(const json& j) {
    RunConfig cfg;
    cfg.mesh = j.value("mesh", 0.005);
    if (!(cfg.mesh >= 1e-6)) fail("mesh", "must be at least 1e-6 years");
    cfg.output = std::filesystem::path(j.value("output", std::string("out")));

    for (const auto& [name, body] : need(j, "bases", "").items()) {
        TechnicalBasis tb;
        tb.delta = curve_from_json(need(body, "delta", "bases." + name), "bases." + name + ".delta");
        tb.mu = curve_from_json(need(body, "mu", "bases." + name), "bases." + name + ".mu");
        tb.label = name;
        cfg.bases.emplace(name, std::move(tb));
    }
    if (cfg.bases.empty()) fail("bases", "at least one technical basis is required");

    for (const auto& [name, body] : need(j, "cashflows", "").items())
        cfg.cashflows.emplace(name, cashflows_from_json(body, "cashflows." + name));
    if (cfg.cashflows.empty()) fail("cashflows", "at least one cashflow spec is required");

    const json& c = need(j, "contract", "");
    cfg.contract.valuation_basis = need(c, "valuation_basis", "contract").get<std::string>();
    cfg.contract.valuation_cashflows =
        need(c, "valuation_cashflows", "contract").get<std::string>();
    cfg.contract.experience_basis = need(c, "experience_basis", "contract").get<std::string>();
    cfg.contract.experience_cashflows =
        need(c, "experience_cashflows", "contract").get<std::string>();
    cfg.contract.premium_basis = c.value("premium_basis", cfg.contract.valuation_basis);
    if (c.contains("paidup_times"))
        cfg.contract.paidup_times = c.at("paidup_times").get<std::vector<double>>();
    if (c.contains("bonus")) {
        BonusPair bp;
        bp.anticipated =
            curve_from_json(need(c.at("bonus"), "anticipated", "contract.bonus"),
                            "contract.bonus.anticipated");
        bp.declared = curve_from_json(need(c.at("bonus"), "declared", "contract.bonus"),
                                      "contract.bonus.declared");
        cfg.contract.bonus = std::move(bp);
    }

    if (j.contains("mc")) {
        const json& m = j.at("mc");
        MonteCarloSettings mc;
        const double paths = need_number(m, "paths", "mc");
        if (!(paths >= 2.0) || paths > 1e9) fail("mc.paths", "must be between 2 and 1e9");
        mc.n_paths = static_cast<std::size_t>(paths);
        if (!m.contains("seed")) fail("mc.seed", "a seed is required whenever mc is configured");
        mc.seed = m.at("seed").get<std::uint64_t>();
        if (m.contains("checkpoints"))
            mc.checkpoints = m.at("checkpoints").get<std::vector<double>>();
        if (m.contains("intervals")) {
            for (const auto& iv : m.at("intervals")) {
                if (!iv.is_array() || iv.size() != 2) fail("mc.intervals", "expected [a, b] pairs");
                mc.intervals.push_back(Interval{iv.at(0).get<double>(), iv.at(1).get<double>()});
            }
        }
        mc.h = cfg.mesh;
        cfg.mc = std::move(mc);
    }
    return cfg;
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

const TechnicalBasis& find_basis(const RunConfig& cfg, const std::string& name,
                                 const std::string& path) {
    const auto it = cfg.bases.find(name);
    if (it == cfg.bases.end()) fail(path, "unknown basis '" + name + "'");
    return it->second;
}

const CashflowDecl& find_cashflows(const RunConfig& cfg, const std::string& name,
                                   const std::string& path) {
    const auto it = cfg.cashflows.find(name);
    if (it == cfg.cashflows.end()) fail(path, "unknown cashflow spec '" + name + "'");
    return it->second;
}

CashflowSpec materialize(const CashflowDecl& decl, const TechnicalBasis& solve_basis,
                         double mesh) {
    CashflowSpec cf;
    cf.death_benefit = decl.death_benefit;
    cf.maturity_benefit = decl.maturity_benefit;
    cf.term = decl.term;
    cf.bonus_rate = decl.bonus_rate;
    if (decl.premium) {
        cf.premium = *decl.premium;
    } else {
        cf.premium = RateCurve::constant(equivalence_premium(solve_basis, cf, mesh));
    }
    return cf;
}

void check_hazard(const TechnicalBasis& tb, double term, double h, const std::string& path) {
    const std::size_t steps = node_count(term, h) - 1;
    for (std::size_t i = 0; i <= steps; ++i)
        if (tb.mu(h * static_cast<double>(i)) < 0.0)
            fail(path, "force of mortality is negative on the mesh");
}

}  // namespace

ResolvedContract resolve(const RunConfig& cfg) {
    const ContractBinding& c = cfg.contract;
    const TechnicalBasis& tb_val = find_basis(cfg, c.valuation_basis, "contract.valuation_basis");
    const TechnicalBasis& tb_exp =
        find_basis(cfg, c.experience_basis, "contract.experience_basis");
    const TechnicalBasis& tb_prem = find_basis(cfg, c.premium_basis, "contract.premium_basis");
    const CashflowDecl& cf_val =
        find_cashflows(cfg, c.valuation_cashflows, "contract.valuation_cashflows");
    const CashflowDecl& cf_exp =
        find_cashflows(cfg, c.experience_cashflows, "contract.experience_cashflows");

    if (std::abs(cf_val.term - cf_exp.term) > 1e-9)
        fail("contract", "valuation and experience cashflows must share the term");
    try {
        node_count(cf_exp.term, cfg.mesh);
    } catch (const std::domain_error&) {
        fail("mesh", "must divide the contract term");
    }
    check_hazard(tb_val, cf_val.term, cfg.mesh, "contract.valuation_basis");
    check_hazard(tb_exp, cf_exp.term, cfg.mesh, "contract.experience_basis");
    check_hazard(tb_prem, cf_exp.term, cfg.mesh, "contract.premium_basis");

    ResolvedContract out;
    out.mesh = cfg.mesh;
    out.output = cfg.output;
    out.paidup_times = c.paidup_times;
    out.bonus = c.bonus;
    out.mc = cfg.mc;

    // Contractual premium first: the experience cashflows are the facts.
    out.experience.technical = tb_exp;
    out.experience.cashflows = materialize(cf_exp, tb_prem, cfg.mesh);
    out.experience.label = c.experience_basis;

    out.premium.technical = tb_prem;
    out.premium.cashflows = out.experience.cashflows;
    out.premium.label = c.premium_basis;

    out.valuation.technical = tb_val;
    out.valuation.cashflows = materialize(cf_val, tb_val, cfg.mesh);
    out.valuation.label = c.valuation_basis;
    return out;
}

}  // namespace lifesurplus
