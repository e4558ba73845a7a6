#include "lego/system_data.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace lego {

namespace {

bool valid_identifier(const std::string& id) {
    if (id.empty() || id.size() > 64) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    });
}

[[noreturn]] void fail(const std::string& record, const std::string& field, double value, const std::string& rule) {
    std::ostringstream os;
    os << record << ": " << field << " = " << format_double(value) << " violates " << rule;
    throw ValidationError(os.str());
}

void require(bool ok, const std::string& record, const std::string& field, double value, const std::string& rule) {
    if (!ok) fail(record, field, value, rule);
}

void check_id(const std::string& kind, const std::string& id) {
    if (!valid_identifier(id)) {
        throw ValidationError(kind + " '" + id + "': identifiers use letters, digits, '_' and '.'");
    }
}

void check_bus_ref(const SystemData& s, const std::string& record, const std::string& bus) {
    if (s.bus_index(bus) < 0) throw ValidationError(record + ": unknown bus " + bus);
}

}  // namespace

int SystemData::bus_index(const std::string& id) const {
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (buses[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

int SystemData::slack_index() const {
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (buses[i].is_slack) return static_cast<int>(i);
    }
    return -1;
}

int SystemData::profile_index(const std::string& key) const {
    auto it = std::lower_bound(profile_keys.begin(), profile_keys.end(), key);
    if (it == profile_keys.end() || *it != key) return -1;
    return static_cast<int>(it - profile_keys.begin());
}

double SystemData::demand_total(int rp, int k) const {
    double s = 0.0;
    for (int i = 0; i < demand_p.n_cols(); ++i) s += demand_p(rp, k, i);
    return s;
}

void validate_system(const SystemData& s) {
    if (s.buses.empty()) throw ValidationError("system has no buses");
    std::set<std::string> bus_ids;
    int slack_count = 0;
    for (const auto& b : s.buses) {
        check_id("bus", b.id);
        std::string rec = "bus " + b.id;
        if (!bus_ids.insert(b.id).second) throw ValidationError(rec + ": duplicate id");
        require(b.v_min > 0.0, rec, "vmin_pu", b.v_min, "0 < vmin");
        require(b.v_min <= b.v_max, rec, "vmax_pu", b.v_max, "vmin <= vmax");
        slack_count += b.is_slack ? 1 : 0;
    }
    if (slack_count != 1) {
        throw ValidationError("exactly one slack bus required, found " + std::to_string(slack_count));
    }

    std::set<std::tuple<std::string, std::string, std::string>> line_keys;
    for (const auto& l : s.lines) {
        std::string rec = "line " + l.from_bus + "-" + l.to_bus + "-" + l.circuit;
        check_id("line circuit", l.circuit);
        check_bus_ref(s, rec, l.from_bus);
        check_bus_ref(s, rec, l.to_bus);
        if (l.from_bus == l.to_bus) throw ValidationError(rec + ": from_bus equals to_bus");
        if (!line_keys.insert({l.from_bus, l.to_bus, l.circuit}).second) {
            throw ValidationError(rec + ": duplicate line");
        }
        require(l.flow_limit > 0.0, rec, "tmax_gw", l.flow_limit, "tmax > 0");
        require(l.apparent_limit > 0.0, rec, "amax_mva", l.apparent_limit, "amax > 0");
        require(l.reactance != 0.0, rec, "x_pu", l.reactance, "x != 0");
    }

    std::set<std::string> unit_ids;
    auto unit = [&](const std::string& kind, const std::string& id, const std::string& bus) {
        check_id(kind, id);
        std::string rec = kind + " " + id;
        if (!unit_ids.insert(id).second) throw ValidationError(rec + ": duplicate unit id");
        check_bus_ref(s, rec, bus);
        return rec;
    };
    for (const auto& t : s.thermal) {
        auto rec = unit("thermal", t.id, t.bus);
        require(t.p_min >= 0.0, rec, "pmin_gw", t.p_min, "0 <= pmin");
        require(t.p_min <= t.p_max, rec, "pmax_gw", t.p_max, "pmin <= pmax");
        require(t.q_min <= t.q_max, rec, "qmax_gvar", t.q_max, "qmin <= qmax");
        require(t.inertia_const >= 0.0, rec, "h_s", t.inertia_const, "H >= 0");
        require(t.ramp_up > 0.0, rec, "ru_gw", t.ramp_up, "RU > 0");
        require(t.ramp_down > 0.0, rec, "rd_gw", t.ramp_down, "RD > 0");
        require(t.existing >= 0, rec, "existing", t.existing, "existing >= 0");
        require(t.build_max >= 0, rec, "max_build", t.build_max, "max_build >= 0");
    }
    for (const auto& r : s.renewable) {
        auto rec = unit("renewable", r.id, r.bus);
        require(r.unit_size > 0.0, rec, "pmax_gw", r.unit_size, "pmax > 0");
        require(r.inertia_const >= 0.0, rec, "h_s", r.inertia_const, "H >= 0");
        require(r.existing >= 0, rec, "existing", r.existing, "existing >= 0");
        require(r.build_max >= 0, rec, "max_build", r.build_max, "max_build >= 0");
        require(r.q_min <= r.q_max, rec, "qmax_gvar", r.q_max, "qmin <= qmax");
        if (s.profile_index(r.profile_key) < 0) {
            throw ValidationError(rec + ": unknown profile " + r.profile_key);
        }
    }
    for (const auto& st : s.storage) {
        auto rec = unit("storage", st.id, st.bus);
        require(st.unit_size > 0.0, rec, "pmax_gw", st.unit_size, "pmax > 0");
        require(st.energy_to_power > 0.0, rec, "etp_h", st.energy_to_power, "ETP > 0");
        require(st.eff_charge > 0.0 && st.eff_charge <= 1.0, rec, "eta_ch", st.eff_charge, "0 < eta <= 1");
        require(st.eff_discharge > 0.0 && st.eff_discharge <= 1.0, rec, "eta_dis", st.eff_discharge, "0 < eta <= 1");
        require(st.min_soc_frac >= 0.0, rec, "rmin", st.min_soc_frac, "0 <= rmin");
        require(st.min_soc_frac <= st.max_soc_frac, rec, "rmax", st.max_soc_frac, "rmin <= rmax");
        require(st.max_soc_frac <= 1.0, rec, "rmax", st.max_soc_frac, "rmax <= 1");
        require(st.inertia_const >= 0.0, rec, "h_s", st.inertia_const, "H >= 0");
        require(st.existing >= 0, rec, "existing", st.existing, "existing >= 0");
        require(st.build_max >= 0, rec, "max_build", st.build_max, "max_build >= 0");
        require(st.initial_reserve >= 0.0, rec, "initial_reserve_gwh", st.initial_reserve, "initial reserve >= 0");
        require(st.q_min <= st.q_max, rec, "qmax_gvar", st.q_max, "qmin <= qmax");
    }
    for (const auto& f : s.facts) {
        auto rec = unit("facts", f.id, f.bus);
        require(f.q_min <= 0.0, rec, "qmin_gvar", f.q_min, "qmin <= 0");
        require(f.q_max >= 0.0, rec, "qmax_gvar", f.q_max, "0 <= qmax");
        require(f.build_max >= 0, rec, "max_build", f.build_max, "max_build >= 0");
    }

    if (s.n_rep_periods < 1) throw ValidationError("rep_periods must be >= 1");
    if (s.steps_per_rp < 1) throw ValidationError("steps_per_rp must be >= 1");
    auto grid_ok = [&](const StepGrid& g, int cols, const std::string& what) {
        if (g.n_rp() != s.n_rep_periods || g.n_k() != s.steps_per_rp || g.n_cols() != cols) {
            throw ValidationError(what + " grid does not match rep_periods x steps_per_rp");
        }
    };
    grid_ok(s.demand_p, static_cast<int>(s.buses.size()), "demand");
    grid_ok(s.demand_q, static_cast<int>(s.buses.size()), "demand");
    grid_ok(s.profiles, static_cast<int>(s.profile_keys.size()), "profile");
    grid_ok(s.inflows, static_cast<int>(s.storage.size()), "inflow");
    for (int rp = 1; rp <= s.n_rep_periods; ++rp) {
        for (int k = 1; k <= s.steps_per_rp; ++k) {
            for (std::size_t i = 0; i < s.buses.size(); ++i) {
                double d = s.demand_p(rp, k, static_cast<int>(i));
                std::string rec = "demand rp=" + std::to_string(rp) + " k=" + std::to_string(k) + " bus " + s.buses[i].id;
                require(d >= 0.0, rec, "dp_gw", d, "demand >= 0");
            }
            for (std::size_t j = 0; j < s.profile_keys.size(); ++j) {
                double v = s.profiles(rp, k, static_cast<int>(j));
                std::string rec = "profile " + s.profile_keys[j] + " rp=" + std::to_string(rp) + " k=" + std::to_string(k);
                require(v >= 0.0 && v <= 1.0, rec, "value", v, "0 <= value <= 1");
            }
        }
    }
    require(s.base_power > 0.0, "system", "base_power_mva", s.base_power, "SB > 0");
    require(s.max_angle_diff > 0.0, "system", "max_angle_diff_rad", s.max_angle_diff, "angle > 0");
    require(s.kappa >= 0.0 && s.kappa <= 1.0, "system", "kappa", s.kappa, "0 <= kappa <= 1");
    require(s.ens_cost >= 0.0, "system", "ens_cost_meur_gwh", s.ens_cost, "C_ENS >= 0");
    require(s.moving_window >= 0, "system", "moving_window", s.moving_window, "MOW >= 0");
    require(s.inertia.f_base > 0.0, "system", "f_base_hz", s.inertia.f_base, "f_base > 0");
    require(s.inertia.rocof_limit > 0.0, "system", "rocof_limit_hz_s", s.inertia.rocof_limit, "RoCoF limit > 0");
    require(s.inertia.inertia_cap > 0.0, "system", "inertia_cap_s", s.inertia.inertia_cap, "inertia cap > 0");
    require(s.inertia.disturbance >= 0.0, "system", "disturbance_pu", s.inertia.disturbance, "disturbance >= 0");
}

namespace {

void check_step(const CsvTable::Row& row, const SystemData& s, int rp, int k, const std::string& file) {
    if (rp < 1 || rp > s.n_rep_periods || k < 1 || k > s.steps_per_rp) {
        throw ValidationError(file + ":" + std::to_string(row.line()) + ": step (" + std::to_string(rp) + "," +
                              std::to_string(k) + ") outside rep_periods x steps_per_rp");
    }
}

int to_int(long v) { return static_cast<int>(v); }

}  // namespace

SystemData load_system(const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root)) throw LoadError("dataset directory not found: " + root.string());
    SystemData s;

    auto scalars = KeyValueFile::read(root / "system.toml");
    s.base_power = scalars.num_or("base_power_mva", s.base_power);
    s.max_angle_diff = scalars.num_or("max_angle_diff_rad", s.max_angle_diff);
    s.reserve_up = scalars.num_or("reserve_up", s.reserve_up);
    s.reserve_down = scalars.num_or("reserve_down", s.reserve_down);
    s.reserve_up_cost = scalars.num_or("reserve_up_cost", s.reserve_up_cost);
    s.reserve_down_cost = scalars.num_or("reserve_down_cost", s.reserve_down_cost);
    s.ens_cost = scalars.num_or("ens_cost_meur_gwh", s.ens_cost);
    s.kappa = scalars.num_or("kappa", s.kappa);
    s.n_rep_periods = static_cast<int>(scalars.num_or("rep_periods", 1));
    s.steps_per_rp = static_cast<int>(scalars.num_or("steps_per_rp", 1));
    s.moving_window = static_cast<int>(scalars.num_or("moving_window", 0));
    s.inertia.f_base = scalars.num_or("f_base_hz", s.inertia.f_base);
    s.inertia.rocof_limit = scalars.num_or("rocof_limit_hz_s", s.inertia.rocof_limit);
    s.inertia.inertia_cap = scalars.num_or("inertia_cap_s", s.inertia.inertia_cap);
    s.inertia.disturbance = scalars.num_or("disturbance_pu", s.inertia.disturbance);
    if (s.n_rep_periods < 1 || s.steps_per_rp < 1) throw ValidationError("system.toml: rep_periods and steps_per_rp must be >= 1");

    for (const auto& r : CsvTable::read(root / "buses.csv")) {
        s.buses.push_back({r.str("id"), r.num("g_pu"), r.num("b_pu"), r.num("r_pu"), r.num("vmin_pu"),
                           r.num("vmax_pu"), r.flag("slack")});
    }
    for (const auto& r : CsvTable::read(root / "lines.csv")) {
        s.lines.push_back({r.str("from"), r.str("to"), r.str("circuit"), r.num("g_pu"), r.num("b_pu"),
                           r.num("bc_pu"), r.num("x_pu"), r.num("tmax_gw"), r.num("amax_mva")});
    }
    for (const auto& r : CsvTable::read(root / "thermal.csv")) {
        ThermalUnit t;
        t.id = r.str("id");
        t.bus = r.str("bus");
        t.p_min = r.num("pmin_gw");
        t.p_max = r.num("pmax_gw");
        t.q_min = r.num("qmin_gvar");
        t.q_max = r.num("qmax_gvar");
        t.inertia_const = r.num("h_s");
        t.c_startup = r.num("csu_meur");
        t.c_commit = r.num("cup_meur_h");
        t.c_var = r.num("cvar_meur_gwh");
        t.c_inv = r.num("cinv_meur_gw_y");
        t.ramp_up = r.num("ru_gw");
        t.ramp_down = r.num("rd_gw");
        t.existing = to_int(r.integer("existing"));
        t.build_max = to_int(r.integer("max_build"));
        s.thermal.push_back(std::move(t));
    }
    for (const auto& r : CsvTable::read(root / "renewable.csv")) {
        RenewableUnit u;
        u.id = r.str("id");
        u.bus = r.str("bus");
        u.unit_size = r.num("pmax_gw");
        u.inertia_const = r.num("h_s");
        u.c_om = r.num("com_meur_gwh");
        u.c_inv = r.num("cinv_meur_gw_y");
        u.existing = to_int(r.integer("existing"));
        u.build_max = to_int(r.integer("max_build"));
        u.profile_key = r.str("profile");
        u.q_min = r.num_or("qmin_gvar", 0.0);
        u.q_max = r.num_or("qmax_gvar", 0.0);
        s.renewable.push_back(std::move(u));
    }
    for (const auto& r : CsvTable::read(root / "storage.csv")) {
        StorageUnit u;
        u.id = r.str("id");
        u.bus = r.str("bus");
        u.unit_size = r.num("pmax_gw");
        u.energy_to_power = r.num("etp_h");
        u.eff_charge = r.num("eta_ch");
        u.eff_discharge = r.num("eta_dis");
        u.min_soc_frac = r.num("rmin");
        u.max_soc_frac = r.num_or("rmax", 1.0);
        u.inertia_const = r.num("h_s");
        u.c_om = r.num("com_meur_gwh");
        u.c_inv = r.num("cinv_meur_gw_y");
        u.existing = to_int(r.integer("existing"));
        u.build_max = to_int(r.integer("max_build"));
        u.initial_reserve = r.num_or("initial_reserve_gwh", 0.0);
        u.is_hydro = r.flag("hydro");
        u.q_min = r.num_or("qmin_gvar", 0.0);
        u.q_max = r.num_or("qmax_gvar", 0.0);
        s.storage.push_back(std::move(u));
    }
    for (const auto& r : CsvTable::read(root / "facts.csv")) {
        s.facts.push_back({r.str("id"), r.str("bus"), r.num("qmin_gvar"), r.num("qmax_gvar"),
                           r.num("cinv_meur_gvar_y"), to_int(r.integer("max_build"))});
    }

    const int nb = static_cast<int>(s.buses.size());
    s.demand_p = StepGrid(s.n_rep_periods, s.steps_per_rp, nb);
    s.demand_q = StepGrid(s.n_rep_periods, s.steps_per_rp, nb);
    for (const auto& r : CsvTable::read(root / "demand.csv")) {
        int rp = to_int(r.integer("rp")), k = to_int(r.integer("k"));
        check_step(r, s, rp, k, "demand.csv");
        int b = s.bus_index(r.str("bus"));
        if (b < 0) throw ValidationError("demand.csv:" + std::to_string(r.line()) + ": unknown bus " + r.str("bus"));
        s.demand_p(rp, k, b) = r.num("dp_gw");
        s.demand_q(rp, k, b) = r.num("dq_gvar");
    }

    auto profile_table = CsvTable::read(root / "profiles.csv");
    std::set<std::string> keys;
    for (const auto& r : profile_table) keys.insert(r.str("profile"));
    s.profile_keys.assign(keys.begin(), keys.end());
    s.profiles = StepGrid(s.n_rep_periods, s.steps_per_rp, static_cast<int>(s.profile_keys.size()));
    for (const auto& r : profile_table) {
        int rp = to_int(r.integer("rp")), k = to_int(r.integer("k"));
        check_step(r, s, rp, k, "profiles.csv");
        s.profiles(rp, k, s.profile_index(r.str("profile"))) = r.num("value");
    }

    s.inflows = StepGrid(s.n_rep_periods, s.steps_per_rp, static_cast<int>(s.storage.size()));
    if (std::filesystem::exists(root / "inflows.csv")) {
        for (const auto& r : CsvTable::read(root / "inflows.csv")) {
            int rp = to_int(r.integer("rp")), k = to_int(r.integer("k"));
            check_step(r, s, rp, k, "inflows.csv");
            auto it = std::find_if(s.storage.begin(), s.storage.end(),
                                   [&](const StorageUnit& u) { return u.id == r.str("storage"); });
            if (it == s.storage.end()) {
                throw ValidationError("inflows.csv:" + std::to_string(r.line()) + ": unknown storage " + r.str("storage"));
            }
            s.inflows(rp, k, static_cast<int>(it - s.storage.begin())) = r.num("inflow_gwh");
        }
    }

    validate_system(s);
    return s;
}

namespace {

std::string f(double v) { return format_double(v); }

}  // namespace

void save_system(const SystemData& s, const std::filesystem::path& root) {
    std::filesystem::create_directories(root);
    std::ostringstream os;
    os << "base_power_mva = " << f(s.base_power) << "\n"
       << "max_angle_diff_rad = " << f(s.max_angle_diff) << "\n"
       << "reserve_up = " << f(s.reserve_up) << "\n"
       << "reserve_down = " << f(s.reserve_down) << "\n"
       << "reserve_up_cost = " << f(s.reserve_up_cost) << "\n"
       << "reserve_down_cost = " << f(s.reserve_down_cost) << "\n"
       << "ens_cost_meur_gwh = " << f(s.ens_cost) << "\n"
       << "kappa = " << f(s.kappa) << "\n"
       << "rep_periods = " << s.n_rep_periods << "\n"
       << "steps_per_rp = " << s.steps_per_rp << "\n"
       << "moving_window = " << s.moving_window << "\n"
       << "f_base_hz = " << f(s.inertia.f_base) << "\n"
       << "rocof_limit_hz_s = " << f(s.inertia.rocof_limit) << "\n"
       << "inertia_cap_s = " << f(s.inertia.inertia_cap) << "\n"
       << "disturbance_pu = " << f(s.inertia.disturbance) << "\n";
    write_text_file(root / "system.toml", os.str());

    os.str("");
    os << "id,g_pu,b_pu,r_pu,vmin_pu,vmax_pu,slack\n";
    for (const auto& b : s.buses) {
        os << b.id << ',' << f(b.shunt_conductance) << ',' << f(b.shunt_susceptance) << ',' << f(b.reactive_ratio)
           << ',' << f(b.v_min) << ',' << f(b.v_max) << ',' << (b.is_slack ? 1 : 0) << '\n';
    }
    write_text_file(root / "buses.csv", os.str());

    os.str("");
    os << "from,to,circuit,g_pu,b_pu,bc_pu,x_pu,tmax_gw,amax_mva\n";
    for (const auto& l : s.lines) {
        os << l.from_bus << ',' << l.to_bus << ',' << l.circuit << ',' << f(l.conductance) << ',' << f(l.susceptance)
           << ',' << f(l.charging) << ',' << f(l.reactance) << ',' << f(l.flow_limit) << ',' << f(l.apparent_limit)
           << '\n';
    }
    write_text_file(root / "lines.csv", os.str());

    os.str("");
    os << "id,bus,pmin_gw,pmax_gw,qmin_gvar,qmax_gvar,h_s,csu_meur,cup_meur_h,cvar_meur_gwh,cinv_meur_gw_y,ru_gw,rd_gw,"
          "existing,max_build\n";
    for (const auto& t : s.thermal) {
        os << t.id << ',' << t.bus << ',' << f(t.p_min) << ',' << f(t.p_max) << ',' << f(t.q_min) << ','
           << f(t.q_max) << ',' << f(t.inertia_const) << ',' << f(t.c_startup) << ',' << f(t.c_commit) << ','
           << f(t.c_var) << ',' << f(t.c_inv) << ',' << f(t.ramp_up) << ',' << f(t.ramp_down) << ',' << t.existing
           << ',' << t.build_max << '\n';
    }
    write_text_file(root / "thermal.csv", os.str());

    os.str("");
    os << "id,bus,pmax_gw,h_s,com_meur_gwh,cinv_meur_gw_y,existing,max_build,profile,qmin_gvar,qmax_gvar\n";
    for (const auto& r : s.renewable) {
        os << r.id << ',' << r.bus << ',' << f(r.unit_size) << ',' << f(r.inertia_const) << ',' << f(r.c_om) << ','
           << f(r.c_inv) << ',' << r.existing << ',' << r.build_max << ',' << r.profile_key << ',' << f(r.q_min)
           << ',' << f(r.q_max) << '\n';
    }
    write_text_file(root / "renewable.csv", os.str());

    os.str("");
    os << "id,bus,pmax_gw,etp_h,eta_ch,eta_dis,rmin,rmax,h_s,com_meur_gwh,cinv_meur_gw_y,existing,max_build,"
          "initial_reserve_gwh,hydro,qmin_gvar,qmax_gvar\n";
    for (const auto& u : s.storage) {
        os << u.id << ',' << u.bus << ',' << f(u.unit_size) << ',' << f(u.energy_to_power) << ','
           << f(u.eff_charge) << ',' << f(u.eff_discharge) << ',' << f(u.min_soc_frac) << ',' << f(u.max_soc_frac)
           << ',' << f(u.inertia_const) << ',' << f(u.c_om) << ',' << f(u.c_inv) << ',' << u.existing << ','
           << u.build_max << ',' << f(u.initial_reserve) << ',' << (u.is_hydro ? 1 : 0) << ',' << f(u.q_min) << ','
           << f(u.q_max) << '\n';
    }
    write_text_file(root / "storage.csv", os.str());

    os.str("");
    os << "id,bus,qmin_gvar,qmax_gvar,cinv_meur_gvar_y,max_build\n";
    for (const auto& d : s.facts) {
        os << d.id << ',' << d.bus << ',' << f(d.q_min) << ',' << f(d.q_max) << ',' << f(d.c_inv) << ','
           << d.build_max << '\n';
    }
    write_text_file(root / "facts.csv", os.str());

    os.str("");
    os << "rp,k,bus,dp_gw,dq_gvar\n";
    for (int rp = 1; rp <= s.n_rep_periods; ++rp) {
        for (int k = 1; k <= s.steps_per_rp; ++k) {
            for (std::size_t i = 0; i < s.buses.size(); ++i) {
                int b = static_cast<int>(i);
                os << rp << ',' << k << ',' << s.buses[i].id << ',' << f(s.demand_p(rp, k, b)) << ','
                   << f(s.demand_q(rp, k, b)) << '\n';
            }
        }
    }
    write_text_file(root / "demand.csv", os.str());

    os.str("");
    os << "rp,k,profile,value\n";
    for (int rp = 1; rp <= s.n_rep_periods; ++rp) {
        for (int k = 1; k <= s.steps_per_rp; ++k) {
            for (std::size_t j = 0; j < s.profile_keys.size(); ++j) {
                os << rp << ',' << k << ',' << s.profile_keys[j] << ',' << f(s.profiles(rp, k, static_cast<int>(j)))
                   << '\n';
            }
        }
    }
    write_text_file(root / "profiles.csv", os.str());

    os.str("");
    os << "rp,k,storage,inflow_gwh\n";
    for (int rp = 1; rp <= s.n_rep_periods; ++rp) {
        for (int k = 1; k <= s.steps_per_rp; ++k) {
            for (std::size_t j = 0; j < s.storage.size(); ++j) {
                double v = s.inflows(rp, k, static_cast<int>(j));
                if (v != 0.0) os << rp << ',' << k << ',' << s.storage[j].id << ',' << f(v) << '\n';
            }
        }
    }
    write_text_file(root / "inflows.csv", os.str());
}

}  // namespace lego
