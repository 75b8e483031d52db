#include "carbon/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "carbon/errors.hpp"

namespace carbon::cli {

namespace {

std::string to_chars_general(double value, int precision) {
    char buf[64];
    std::to_chars_result r =
        precision > 0 ? std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general,
                                      precision)
                      : std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, r.ptr);
}

class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, const std::string& header) : path_(path) {
        out_.open(path, std::ios::binary);  // byte-stable bodies across platforms
        if (!out_) throw IoError("cannot write " + path.string());
        out_ << header << "\n";
    }

    void raw_row(const std::string& row) { out_ << row << "\n"; }

    void close() {
        out_.close();
        if (!out_) throw IoError("failed writing " + path_.string());
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

}  // namespace

std::string format_number(double value) { return to_chars_general(value, 10); }
std::string format_number_full(double value) { return to_chars_general(value, 0); }

void write_policy_csv(const std::filesystem::path& path, const dice::AbatementPolicy& policy,
                      double dt, int start_year) {
    CsvFile csv(path, "period,year,mu");
    for (int i = 0; i < policy.periods(); ++i) {
        csv.raw_row(std::to_string(i) + "," + format_number(start_year + i * dt) + "," +
                    format_number_full(policy.mu[i]));
    }
    csv.close();
}

dice::AbatementPolicy read_policy_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read policy file: " + path.string());
    dice::AbatementPolicy policy;
    std::string line;
    if (!std::getline(in, line)) throw IoError("policy file is empty: " + path.string());
    int expected = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string period, year, mu;
        if (!std::getline(row, period, ',') || !std::getline(row, year, ',') ||
            !std::getline(row, mu))
            throw IoError("malformed policy row: " + line);
        try {
            if (std::stoi(period) != expected)
                throw IoError("policy file periods must be contiguous from zero");
            policy.mu.push_back(std::stod(mu));
        } catch (const std::invalid_argument&) {
            throw IoError("malformed policy row: " + line);
        } catch (const std::out_of_range&) {
            throw IoError("malformed policy row: " + line);
        }
        ++expected;
    }
    return policy;
}

namespace {

void write_prices_summary(const std::filesystem::path& dir, const pricing::PriceReport& p) {
    CsvFile csv(dir / "prices_summary.csv", "k_par,k_par_star,k_scc,scc_initial,gap_at_zero");
    csv.raw_row(format_number(p.k_par) + "," + format_number(p.k_par_star) + "," +
                format_number(p.k_scc) + "," + format_number(p.scc_initial) + "," +
                format_number(p.gap_at_zero));
    csv.close();
}

void write_scc_curve(const std::filesystem::path& dir, const pricing::PriceReport& p,
                     const dice::Trajectory& traj) {
    CsvFile csv(dir / "scc_curve.csv", "period,year,scc");
    for (std::size_t i = 0; i < p.scc.size(); ++i)
        csv.raw_row(std::to_string(i) + "," + format_number(traj.year(static_cast<int>(i))) + "," +
                    format_number(p.scc[i]));
    csv.close();
}

void write_deviation_curve(const std::filesystem::path& dir, const pricing::PriceReport& p,
                           const dice::Trajectory& traj) {
    // Both orientations of the gap are reported.
    CsvFile csv(dir / "deviation_curve.csv",
                "period,year,scc_discounted_minus_k_scc,k_scc_minus_scc_discounted");
    for (std::size_t i = 0; i < p.deviation.size(); ++i)
        csv.raw_row(std::to_string(i) + "," + format_number(traj.year(static_cast<int>(i))) + "," +
                    format_number(p.deviation[i]) + "," + format_number(-p.deviation[i]));
    csv.close();
}

void write_horizon_sweep(const std::filesystem::path& dir, const pricing::PriceReport& p) {
    CsvFile csv(dir / "horizon_sweep.csv", "horizon_years,k_par,k_par_star");
    for (const pricing::HorizonPoint& h : p.horizon_curve) {
        if (h.defined)
            csv.raw_row(format_number(h.horizon_years) + "," + format_number(h.k_par) + "," +
                        format_number(h.k_par_star));
        else
            csv.raw_row(format_number(h.horizon_years) + ",,");
    }
    csv.close();
}

void write_cost_emission(const std::filesystem::path& dir, const dice::Trajectory& traj) {
    CsvFile csv(dir / "cost_emission.csv",
                "period,year,cost_total,cost_abatement,cost_damage,cost_discounted,emission");
    for (int i = 0; i < traj.periods(); ++i)
        csv.raw_row(std::to_string(i) + "," + format_number(traj.year(i)) + "," +
                    format_number(traj.cost_total[i]) + "," +
                    format_number(traj.cost_abatement[i]) + "," +
                    format_number(traj.cost_damage[i]) + "," +
                    format_number(traj.cost_total[i] / traj.numeraire[i]) + "," +
                    format_number(traj.emission[i]));
    csv.close();
}

void write_trajectory(const std::filesystem::path& dir, const dice::Trajectory& traj) {
    CsvFile csv(dir / "trajectory.csv",
                "period,year,emission,output_gross,cost_abatement,cost_damage,cost_total,"
                "consumption,utility,numeraire,m_atm,m_upper,m_lower,t_atm,t_lower,capital");
    for (int i = 0; i < traj.periods(); ++i) {
        const dice::ClimateEconomyState& s = traj.state[i];
        csv.raw_row(std::to_string(i) + "," + format_number(traj.year(i)) + "," +
                    format_number(traj.emission[i]) + "," + format_number(traj.output_gross[i]) +
                    "," + format_number(traj.cost_abatement[i]) + "," +
                    format_number(traj.cost_damage[i]) + "," + format_number(traj.cost_total[i]) +
                    "," + format_number(traj.consumption[i]) + "," +
                    format_number(traj.utility[i]) + "," + format_number(traj.numeraire[i]) + "," +
                    format_number(s.m_atm) + "," + format_number(s.m_upper) + "," +
                    format_number(s.m_lower) + "," + format_number(s.t_atm) + "," +
                    format_number(s.t_lower) + "," + format_number(s.capital));
    }
    csv.close();
}

void write_r_scc_curve(const std::filesystem::path& dir, const rates::RateReport& r,
                       const dice::Trajectory& traj) {
    CsvFile csv(dir / "r_scc_curve.csv", "period,year,r_scc,discount_rate,no_root_flag");
    for (std::size_t i = 0; i < r.periods.size(); ++i) {
        const int period = r.periods[i];
        csv.raw_row(std::to_string(period) + "," + format_number(traj.year(period)) + "," +
                    (r.found[i] ? format_number(r.r_scc[i]) : std::string()) + "," +
                    format_number(r.discount_rate) + "," + (r.found[i] ? "0" : "1"));
    }
    csv.close();
}

void write_sensitivities_t0(const std::filesystem::path& dir, const rates::CostSensitivity& s,
                            const dice::Trajectory& traj) {
    CsvFile csv(dir / "sensitivities_t0.csv",
                "period,year,d_cost_damage_d_mu0,d_cost_total_d_mu0");
    for (std::size_t k = 0; k < s.damage.size(); ++k) {
        const int period = s.period + static_cast<int>(k);
        csv.raw_row(std::to_string(period) + "," + format_number(traj.year(period)) + "," +
                    format_number(s.damage[k]) + "," + format_number(s.total_cost[k]));
    }
    csv.close();
}

}  // namespace

int run_scenario(const ScenarioConfig& config, std::ostream& log,
                 ScenarioArtifacts* artifacts_out) {
    {
        const std::vector<std::string> violations = validate_config(config);
        if (!violations.empty()) {
            std::string msg = "configuration is invalid:";
            for (const std::string& s : violations) msg += "\n  - " + s;
            throw ConfigError(msg);
        }
    }
    const dice::Simulator sim(config.parameters);
    const int n = sim.periods();
    const double dt = sim.derived().dt;
    const std::filesystem::path dir = config.output_dir;

    ScenarioArtifacts artifacts;
    if (config.policy_source == PolicySource::calibrate) {
        log << "calibrating abatement policy (" << n << " periods)...\n";
        const dice::AbatementPolicy initial = dice::AbatementPolicy::ramp(
            n, dt, config.parameters.emissions.mu0, config.parameters.max_abatement, 150.0);
        optimizer::Result result = optimizer::calibrate(sim, initial, config.optimizer);
        artifacts.policy = std::move(result.policy);
        artifacts.certificate = result.certificate;
        artifacts.calibrated = true;
        log << "  iterations " << artifacts.certificate.iterations << ", projected gradient "
            << artifacts.certificate.projected_gradient_norm
            << (artifacts.certificate.converged ? " (converged)\n" : " (iteration cap reached)\n");
        if (!artifacts.certificate.converged)
            log << "  warning: stationarity tolerance not met; analytics continue on the "
                   "best policy found\n";
    } else {
        log << "loading abatement policy from " << config.policy_path << "\n";
        artifacts.policy = read_policy_csv(config.policy_path);
        if (artifacts.policy.periods() != n)
            throw ConfigError("loaded policy has " + std::to_string(artifacts.policy.periods()) +
                              " periods, model expects " + std::to_string(n));
        for (double m : artifacts.policy.mu)
            if (!(m >= 0.0 && m <= config.parameters.max_abatement))
                throw ConfigError("loaded policy leaves [0, max_abatement]");
    }
    write_policy_csv(dir / "policy.csv", artifacts.policy, dt, config.parameters.start_year);

    const dice::Trajectory traj = sim.run(artifacts.policy);
    write_trajectory(dir, traj);

    // Counterfactual with full abatement from the first year on.
    const dice::AbatementPolicy full_abatement =
        dice::AbatementPolicy::constant(n, std::min(1.0, config.parameters.max_abatement));
    const dice::Trajectory counterfactual = sim.run(full_abatement);

    if (config.run_prices) {
        log << "computing price analytics...\n";
        artifacts.prices =
            pricing::build_price_report(sim, artifacts.policy, traj, counterfactual,
                                        config.horizons, config.scc_bump_emission,
                                        config.scc_bump_consumption, config.threads);
        write_prices_summary(dir, artifacts.prices);
        write_scc_curve(dir, artifacts.prices, traj);
        write_deviation_curve(dir, artifacts.prices, traj);
        write_horizon_sweep(dir, artifacts.prices);
        write_cost_emission(dir, traj);
    }

    if (config.run_rates) {
        log << "computing rate analytics...\n";
        std::vector<int> periods(n);
        for (int i = 0; i < n; ++i) periods[i] = i;
        artifacts.rates = rates::r_scc_curve(sim, artifacts.policy, periods,
                                             config.sensitivity_bump, config.threads);
        write_r_scc_curve(dir, artifacts.rates, traj);
        const rates::CostSensitivity s0 =
            rates::cost_sensitivities(sim, artifacts.policy, 0, config.sensitivity_bump);
        write_sensitivities_t0(dir, s0, traj);
    }

    // Human-readable summary.
    {
        std::ofstream out(dir / "summary.txt", std::ios::binary);
        if (!out) throw IoError("cannot write summary.txt");
        out << "carbonsim scenario summary\n";
        out << "==========================\n";
        out << "periods: " << n << "  step: " << dt << " yr  numeraire rate: "
            << format_number(config.parameters.numeraire_rate) << "\n";
        out << "policy: " << (artifacts.calibrated ? "calibrated" : "loaded") << "\n";
        if (artifacts.calibrated) {
            out << "  welfare " << format_number(artifacts.certificate.welfare_final)
                << "  projected gradient "
                << format_number(artifacts.certificate.projected_gradient_norm) << " after "
                << artifacts.certificate.iterations << " iterations"
                << (artifacts.certificate.converged ? "" : " (cap reached)") << "\n";
        }
        if (config.run_prices) {
            const pricing::PriceReport& p = artifacts.prices;
            out << "\nprices [$/tCO2]\n";
            out << "  SCC(" << config.parameters.start_year
                << ") = " << format_number(p.scc_initial) << "\n";
            out << "  K_SCC    = " << format_number(p.k_scc) << "\n";
            out << "  K_par    = " << format_number(p.k_par) << "\n";
            out << "  K_par*   = " << format_number(p.k_par_star) << "\n";
            out << "  accumulated discounted cost = " << format_number(p.gap_at_zero)
                << " $T\n";
        }
        if (config.run_rates && !artifacts.rates.periods.empty()) {
            double acc = 0.0;
            int found = 0;
            for (std::size_t i = 0; i < artifacts.rates.periods.size() && i < 10; ++i) {
                if (artifacts.rates.found[i]) {
                    acc += artifacts.rates.r_scc[i];
                    ++found;
                }
            }
            out << "\nimplied interest rate of carbon\n";
            if (found > 0)
                out << "  mean over first " << found
                    << " periods = " << format_number(acc / found) << " per year\n";
            out << "  discount rate = " << format_number(artifacts.rates.discount_rate)
                << " per year\n";
            out << "  stationarity residual = "
                << format_number(artifacts.rates.stationarity_residual) << "\n";
        }
        out.close();
        if (!out) throw IoError("failed writing summary.txt");
    }

    log << "report written to " << dir.string() << "\n";
    if (artifacts_out != nullptr) *artifacts_out = std::move(artifacts);
    return exit_ok;
}

}  // namespace carbon::cli
