#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "carbon/config.hpp"
#include "carbon/optimizer.hpp"
#include "carbon/pricing.hpp"
#include "carbon/rates.hpp"

namespace carbon::cli {

// Report CSVs use 10 significant digits; the policy file keeps full
// precision so a reloaded policy reproduces the analytics exactly.
std::string format_number(double value);
std::string format_number_full(double value);

void write_policy_csv(const std::filesystem::path& path, const dice::AbatementPolicy& policy,
                      double dt, int start_year);
dice::AbatementPolicy read_policy_csv(const std::filesystem::path& path);

struct ScenarioArtifacts {
    dice::AbatementPolicy policy;
    optimizer::Certificate certificate;  // meaningful when the policy was calibrated
    bool calibrated = false;
    pricing::PriceReport prices;
    rates::RateReport rates;
};

// Full pipeline: validate, build the model, obtain the policy, run the
// enabled analytics, and write the report bundle into config.output_dir.
// Returns exit_ok on success; failures surface as carbon::Error.
int run_scenario(const ScenarioConfig& config, std::ostream& log,
                 ScenarioArtifacts* artifacts_out = nullptr);

}  // namespace carbon::cli
