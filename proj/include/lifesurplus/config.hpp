#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lifesurplus/bonus.hpp"
#include "lifesurplus/simulate.hpp"

namespace lifesurplus {

/// Cashflow declaration as written in the config; the premium may be the
/// sentinel "solve", resolved against a technical basis at binding time.
struct CashflowDecl {
    std::optional<RateCurve> premium;  // absent means "solve"
    RateCurve death_benefit;
    double maturity_benefit = 0.0;
    double term = 0.0;
    std::optional<RateCurve> bonus_rate;
};

struct ContractBinding {
    std::string valuation_basis;
    std::string valuation_cashflows;
    std::string experience_basis;
    std::string experience_cashflows;
    std::string premium_basis;
    std::vector<double> paidup_times;
    std::optional<BonusPair> bonus;
};

struct RunConfig {
    double mesh = 0.005;
    std::filesystem::path output = "out";
    std::map<std::string, TechnicalBasis> bases;
    std::map<std::string, CashflowDecl> cashflows;
    ContractBinding contract;
    std::optional<MonteCarloSettings> mc;
};

/// The concrete bases a command operates on, with any "solve" premiums
/// replaced by level equivalence premiums:
///  - in the experience (contractual) cashflows, solved under the premium
///    basis, so the contract premium is the one actually charged;
///  - in the valuation cashflows, solved under the valuation technical
///    basis (a net premium valuation).
struct ResolvedContract {
    ActuarialBasis valuation;
    ActuarialBasis experience;
    ActuarialBasis premium;  // premium technical basis + contractual cashflows
    std::optional<BonusPair> bonus;
    std::vector<double> paidup_times;
    double mesh = 0.005;
    std::optional<MonteCarloSettings> mc;
    std::filesystem::path output;
};

/// Parse a config file. Throws config_error with a 1-based line number for
/// syntax errors and a field path in the message for schema errors.
RunConfig load_config(const std::filesystem::path& path);

RunConfig parse_config(const std::string& text);

ResolvedContract resolve(const RunConfig& config);

}  // namespace lifesurplus
