#pragma once

// Power-system dataset: network, candidate and existing units, demand and
// availability profiles. Quantities in GW/GWh/GVar, money in MEUR, network
// electrical data in per-unit on the base power.

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lego/text_io.hpp"

namespace lego {

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Bus {
    std::string id;
    double shunt_conductance = 0.0;  // G_i, p.u.
    double shunt_susceptance = 0.0;  // B_i, p.u.
    double reactive_ratio = 0.0;     // R_i = tan(arccos(pf))
    double v_min = 0.9;
    double v_max = 1.1;
    bool is_slack = false;

    friend bool operator==(const Bus&, const Bus&) = default;
};

struct Line {
    std::string from_bus;
    std::string to_bus;
    std::string circuit;
    double conductance = 0.0;  // G_ijc, p.u.
    double susceptance = 0.0;  // B_ijc, p.u.
    double charging = 0.0;     // Bc_ijc, p.u.
    double reactance = 0.0;    // p.u., drives the shift factors
    double flow_limit = 0.0;   // GW
    double apparent_limit = 0.0;  // MVA

    friend bool operator==(const Line&, const Line&) = default;
};

struct ThermalUnit {
    std::string id;
    std::string bus;
    double p_min = 0.0, p_max = 0.0;  // GW
    double q_min = 0.0, q_max = 0.0;  // GVar
    double inertia_const = 0.0;       // H, s
    double c_startup = 0.0;           // MEUR
    double c_commit = 0.0;            // MEUR/h
    double c_var = 0.0;               // MEUR/GWh
    double c_inv = 0.0;               // MEUR/GW/y
    double ramp_up = 0.0, ramp_down = 0.0;  // GW
    int existing = 0;
    int build_max = 0;

    friend bool operator==(const ThermalUnit&, const ThermalUnit&) = default;
};

struct RenewableUnit {
    std::string id;
    std::string bus;
    double unit_size = 0.0;      // GW
    double inertia_const = 0.0;  // s, >0 marks virtual inertia
    double c_om = 0.0;           // MEUR/GWh
    double c_inv = 0.0;          // MEUR/GW/y
    int existing = 0;
    int build_max = 0;
    std::string profile_key;
    double q_min = 0.0, q_max = 0.0;

    friend bool operator==(const RenewableUnit&, const RenewableUnit&) = default;
};

struct StorageUnit {
    std::string id;
    std::string bus;
    double unit_size = 0.0;         // GW
    double energy_to_power = 0.0;   // h
    double eff_charge = 1.0;
    double eff_discharge = 1.0;
    double min_soc_frac = 0.0;
    double max_soc_frac = 1.0;
    double inertia_const = 0.0;
    double c_om = 0.0;
    double c_inv = 0.0;
    int existing = 0;
    int build_max = 0;
    double initial_reserve = 0.0;  // GWh
    bool is_hydro = false;
    double q_min = 0.0, q_max = 0.0;

    friend bool operator==(const StorageUnit&, const StorageUnit&) = default;
};

struct FactsDevice {
    std::string id;
    std::string bus;
    double q_min = 0.0, q_max = 0.0;  // GVar per device
    double c_inv = 0.0;               // MEUR/GVar/y
    int build_max = 0;

    friend bool operator==(const FactsDevice&, const FactsDevice&) = default;
};

/// Dense (rp, k, column) grid of values; rp and k are 1-based.
class StepGrid {
public:
    StepGrid() = default;
    StepGrid(int n_rp, int n_k, int n_cols) : n_rp_(n_rp), n_k_(n_k), n_cols_(n_cols),
        data_(static_cast<std::size_t>(n_rp) * n_k * n_cols, 0.0) {}

    double operator()(int rp, int k, int col) const { return data_[index(rp, k, col)]; }
    double& operator()(int rp, int k, int col) { return data_[index(rp, k, col)]; }
    int n_rp() const { return n_rp_; }
    int n_k() const { return n_k_; }
    int n_cols() const { return n_cols_; }

    friend bool operator==(const StepGrid&, const StepGrid&) = default;

private:
    std::size_t index(int rp, int k, int col) const {
        return (static_cast<std::size_t>(rp - 1) * n_k_ + (k - 1)) * n_cols_ + col;
    }
    int n_rp_ = 0, n_k_ = 0, n_cols_ = 0;
    std::vector<double> data_;
};

struct InertiaSettings {
    double f_base = 50.0;       // Hz
    double rocof_limit = 1.0;   // Hz/s
    double inertia_cap = 30.0;  // s
    double disturbance = 0.0;   // default Delta P for every step

    friend bool operator==(const InertiaSettings&, const InertiaSettings&) = default;
};

struct SystemData {
    std::vector<Bus> buses;
    std::vector<Line> lines;
    std::vector<ThermalUnit> thermal;
    std::vector<RenewableUnit> renewable;
    std::vector<StorageUnit> storage;
    std::vector<FactsDevice> facts;

    int n_rep_periods = 1;
    int steps_per_rp = 1;
    StepGrid demand_p;  // columns: bus index
    StepGrid demand_q;
    std::vector<std::string> profile_keys;  // sorted
    StepGrid profiles;                      // columns: profile_keys index
    StepGrid inflows;                       // columns: storage index, GWh

    double base_power = 100.0;      // SB, MVA
    double max_angle_diff = 0.5;    // rad
    double reserve_up = 0.0, reserve_down = 0.0;
    double reserve_up_cost = 0.0, reserve_down_cost = 0.0;
    double ens_cost = 10.0;         // MEUR/GWh
    double kappa = 0.0;
    int moving_window = 0;          // 0: whole horizon
    InertiaSettings inertia;

    friend bool operator==(const SystemData&, const SystemData&) = default;

    /// SB expressed in GW (flows are in GW, SB is given in MVA).
    double base_power_gw() const { return base_power / 1000.0; }

    int bus_index(const std::string& id) const;
    int slack_index() const;
    int profile_index(const std::string& key) const;
    double demand_total(int rp, int k) const;
};

/// Checks every record invariant and cross-reference; throws ValidationError
/// naming the offending record and field.
void validate_system(const SystemData& system);

/// Reads buses.csv, lines.csv, thermal.csv, renewable.csv, storage.csv,
/// facts.csv, demand.csv, profiles.csv and system.toml (inflows.csv optional).
SystemData load_system(const std::filesystem::path& dataset_root);

/// Writes the same file set load_system reads.
void save_system(const SystemData& system, const std::filesystem::path& dataset_root);

}  // namespace lego
