#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pfc {

enum class StorageMode {
    automatic,     // full when it fits the budget, checkpointed otherwise
    full,
    checkpointed,
    final_only,    // only frames 0 and N_t-1; enough for cost evaluation
};

struct StoragePolicy {
    StorageMode mode = StorageMode::automatic;
    std::size_t budget_bytes = std::size_t{2} << 30;
    std::size_t stride = 0;  // checkpoint spacing; 0 picks ~sqrt(N_t)
};

/// Time history of the (temperature, phase) pair on all mesh nodes.
///
/// With a checkpoint stride s > 1 only every s-th frame is kept; any other
/// frame is regenerated by re-stepping from the preceding checkpoint with the
/// same deterministic stepper, and the whole segment is cached so a reverse
/// sweep recomputes each step once. Frame access is therefore not thread-safe.
class Trajectory {
public:
    /// Advances frame k (y, ytilde) into frame k+1.
    using Stepper = std::function<void(std::size_t k, std::span<const double> y, std::span<const double> yt,
                                       std::span<double> y_next, std::span<double> yt_next)>;

    Trajectory() = default;
    Trajectory(std::size_t levels, std::size_t frame_size, StorageMode mode, std::size_t stride, Stepper stepper);

    /// Offers frame k; kept only if the storage mode needs it.
    void record(std::size_t k, std::span<const double> y, std::span<const double> yt);

    std::span<const double> y(std::size_t k) const;
    std::span<const double> ytilde(std::size_t k) const;

    std::size_t levels() const noexcept { return levels_; }
    std::size_t frame_size() const noexcept { return frame_size_; }
    std::size_t stride() const noexcept { return stride_; }
    StorageMode mode() const noexcept { return mode_; }
    bool has(std::size_t k) const noexcept;

    /// Resolves `policy` for a run with the given shape.
    static std::pair<StorageMode, std::size_t> plan(const StoragePolicy& policy, std::size_t levels,
                                                    std::size_t frame_size);

private:
    const double* frame(const std::vector<double>& store, std::size_t slot) const {
        return store.data() + slot * frame_size_;
    }
    void load_segment(std::size_t start) const;

    std::size_t levels_ = 0;
    std::size_t frame_size_ = 0;
    StorageMode mode_ = StorageMode::full;
    std::size_t stride_ = 1;
    Stepper stepper_;

    std::vector<double> y_store_;
    std::vector<double> yt_store_;

    mutable std::size_t segment_start_ = static_cast<std::size_t>(-1);
    mutable std::vector<double> y_segment_;
    mutable std::vector<double> yt_segment_;
};

}  // namespace pfc
