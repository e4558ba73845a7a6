#include "lego/temporal.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "lego/text_io.hpp"

namespace lego {

TemporalStructure TemporalStructure::hourly_identity(int n_hours) {
    if (n_hours < 1) throw TemporalError("hourly identity needs at least one hour");
    TemporalStructure t;
    t.rp_weight_ = {1.0};
    t.step_weight_.assign(static_cast<std::size_t>(n_hours), 1.0);
    t.gamma_.reserve(static_cast<std::size_t>(n_hours));
    for (int p = 1; p <= n_hours; ++p) t.gamma_.push_back({1, p});
    t.mow_ = n_hours;
    t.chronological_ = true;
    return t;
}

TemporalStructure TemporalStructure::representative(const std::vector<DayAssignment>& assignments, int n_rep_periods,
                                                    int steps_per_rp) {
    if (n_rep_periods < 1) throw TemporalError("need at least one representative period");
    if (steps_per_rp < 1) throw TemporalError("need at least one step per representative period");
    if (assignments.empty()) throw TemporalError("no day assignments");
    int n_days = 0;
    for (const auto& a : assignments) n_days = std::max(n_days, a.day);
    std::vector<int> rp_of_day(static_cast<std::size_t>(n_days) + 1, 0);
    for (const auto& a : assignments) {
        if (a.day < 1) throw TemporalError("day " + std::to_string(a.day) + " out of range");
        if (a.rp < 1 || a.rp > n_rep_periods) {
            throw TemporalError("day " + std::to_string(a.day) + " assigned to unknown rp " + std::to_string(a.rp));
        }
        if (rp_of_day[static_cast<std::size_t>(a.day)] != 0) {
            throw TemporalError("day " + std::to_string(a.day) + " assigned twice");
        }
        rp_of_day[static_cast<std::size_t>(a.day)] = a.rp;
    }
    for (int d = 1; d <= n_days; ++d) {
        if (rp_of_day[static_cast<std::size_t>(d)] == 0) {
            throw TemporalError("day " + std::to_string(d) + " is unassigned");
        }
    }

    TemporalStructure t;
    t.rp_weight_.assign(static_cast<std::size_t>(n_rep_periods), 0.0);
    t.step_weight_.assign(static_cast<std::size_t>(steps_per_rp), 1.0);
    t.gamma_.reserve(static_cast<std::size_t>(n_days) * steps_per_rp);
    for (int d = 1; d <= n_days; ++d) {
        int rp = rp_of_day[static_cast<std::size_t>(d)];
        t.rp_weight_[static_cast<std::size_t>(rp - 1)] += 1.0;
        for (int k = 1; k <= steps_per_rp; ++k) t.gamma_.push_back({rp, k});
    }
    t.mow_ = t.n_periods();
    return t;
}

TemporalStructure TemporalStructure::with_moving_window(int mow) const {
    if (mow < 1) throw TemporalError("moving window must be >= 1");
    if (n_periods() % mow != 0) {
        throw TemporalError("horizon of " + std::to_string(n_periods()) + " periods is not a multiple of MOW " +
                            std::to_string(mow));
    }
    TemporalStructure t = *this;
    t.mow_ = mow;
    return t;
}

TemporalStructure TemporalStructure::with_step_weights(std::vector<double> weights) const {
    if (weights.size() != step_weight_.size()) throw TemporalError("one weight per step required");
    for (double w : weights) {
        if (!(w > 0.0)) throw TemporalError("step weights must be positive");
    }
    TemporalStructure t = *this;
    t.step_weight_ = std::move(weights);
    return t;
}

double TemporalStructure::represented_hours() const {
    double steps = std::accumulate(step_weight_.begin(), step_weight_.end(), 0.0);
    return std::accumulate(rp_weight_.begin(), rp_weight_.end(), 0.0) * steps;
}

StepRef TemporalStructure::gamma(int p) const {
    if (p < 1 || p > n_periods()) throw TemporalError("period " + std::to_string(p) + " out of range");
    return gamma_[static_cast<std::size_t>(p - 1)];
}

StepRef TemporalStructure::prev_cyclic(StepRef s) const {
    return {s.rp, s.k > 1 ? s.k - 1 : steps_per_rp()};
}

StepRef TemporalStructure::next_cyclic(StepRef s) const {
    return {s.rp, s.k < steps_per_rp() ? s.k + 1 : 1};
}

std::vector<int> TemporalStructure::checkpoints() const {
    std::vector<int> out;
    for (int p = mow_; p <= n_periods(); p += mow_) out.push_back(p);
    return out;
}

std::vector<StepRef> TemporalStructure::window_members(int p) const {
    if (!is_checkpoint(p)) {
        throw TemporalError("period " + std::to_string(p) + " is not a checkpoint of MOW " + std::to_string(mow_));
    }
    return {gamma_.begin() + (p - mow_), gamma_.begin() + p};
}

std::vector<StepRef> TemporalStructure::steps() const {
    std::vector<StepRef> out;
    out.reserve(rp_weight_.size() * step_weight_.size());
    for (int rp = 1; rp <= n_rep_periods(); ++rp) {
        for (int k = 1; k <= steps_per_rp(); ++k) out.push_back({rp, k});
    }
    return out;
}

std::vector<DayAssignment> read_assignments(const std::filesystem::path& path) {
    std::vector<DayAssignment> out;
    for (const auto& r : CsvTable::read(path)) {
        out.push_back({static_cast<int>(r.integer("day")), static_cast<int>(r.integer("rp"))});
    }
    return out;
}

TemporalStructure load_temporal(const std::filesystem::path& root, int n_rep_periods, int steps_per_rp,
                                int moving_window) {
    TemporalStructure t;
    if (std::filesystem::exists(root / "assignments.csv")) {
        t = TemporalStructure::representative(read_assignments(root / "assignments.csv"), n_rep_periods, steps_per_rp);
    } else {
        if (n_rep_periods != 1) {
            throw TemporalError("assignments.csv is required when rep_periods > 1");
        }
        t = TemporalStructure::hourly_identity(steps_per_rp);
    }
    return moving_window > 0 ? t.with_moving_window(moving_window) : t;
}

}  // namespace lego
