#pragma once

// Time structure: chronological periods p, representative periods rp and
// steps k inside each rp, with weights and the p -> (rp, k) mapping.

#include <filesystem>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lego {

class TemporalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StepRef {
    int rp = 1;
    int k = 1;
    friend bool operator==(StepRef, StepRef) = default;
    friend auto operator<=>(StepRef, StepRef) = default;
};

struct DayAssignment {
    int day = 0;
    int rp = 0;
};

class TemporalStructure {
public:
    /// Exact chronological model: one rp of weight 1 with n_hours steps.
    static TemporalStructure hourly_identity(int n_hours);

    /// Chronological days mapped onto representative periods of
    /// `steps_per_rp` steps each. Days must cover 1..D exactly once.
    static TemporalStructure representative(const std::vector<DayAssignment>& assignments, int n_rep_periods,
                                            int steps_per_rp);

    /// Returns a copy with the inter-period checkpoint stride set. The
    /// horizon length must be a multiple of it.
    TemporalStructure with_moving_window(int mow) const;
    /// Returns a copy with non-unit step weights W^K.
    TemporalStructure with_step_weights(std::vector<double> weights) const;

    int n_periods() const { return static_cast<int>(gamma_.size()); }
    int n_rep_periods() const { return static_cast<int>(rp_weight_.size()); }
    int steps_per_rp() const { return static_cast<int>(step_weight_.size()); }
    int moving_window() const { return mow_; }

    double rp_weight(int rp) const { return rp_weight_.at(rp - 1); }
    double step_weight(int k) const { return step_weight_.at(k - 1); }
    double weight(StepRef s) const { return rp_weight(s.rp) * step_weight(s.k); }
    double represented_hours() const;

    /// Image of chronological period p (1-based).
    StepRef gamma(int p) const;

    StepRef prev_cyclic(StepRef s) const;
    StepRef next_cyclic(StepRef s) const;

    bool is_checkpoint(int p) const { return p >= 1 && p <= n_periods() && p % mow_ == 0; }
    std::vector<int> checkpoints() const;
    /// (rp, k) images of the periods in (p - MOW, p], one entry per period.
    std::vector<StepRef> window_members(int p) const;

    /// All (rp, k) steps in rp-major order.
    std::vector<StepRef> steps() const;

    bool is_chronological() const { return chronological_; }

private:
    std::vector<double> rp_weight_;
    std::vector<double> step_weight_;
    std::vector<StepRef> gamma_;
    int mow_ = 1;
    bool chronological_ = false;
};

std::vector<DayAssignment> read_assignments(const std::filesystem::path& path);

/// Uses assignments.csv when present in the dataset directory, otherwise the
/// hourly identity over the single rp. moving_window 0 means whole horizon.
TemporalStructure load_temporal(const std::filesystem::path& dataset_root, int n_rep_periods, int steps_per_rp,
                                int moving_window);

}  // namespace lego
