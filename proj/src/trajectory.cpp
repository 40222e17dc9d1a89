#include "pfcontrol/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pfc {

std::pair<StorageMode, std::size_t> Trajectory::plan(const StoragePolicy& policy, std::size_t levels,
                                                     std::size_t frame_size) {
    const std::size_t auto_stride =
        std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(levels)))));
    const std::size_t stride = policy.stride > 1 ? policy.stride : auto_stride;
    switch (policy.mode) {
        case StorageMode::full: return {StorageMode::full, 1};
        case StorageMode::final_only: return {StorageMode::final_only, 1};
        case StorageMode::checkpointed: return {StorageMode::checkpointed, stride};
        case StorageMode::automatic: break;
    }
    const double bytes = 2.0 * sizeof(double) * static_cast<double>(frame_size) * static_cast<double>(levels);
    if (bytes <= static_cast<double>(policy.budget_bytes)) return {StorageMode::full, 1};
    return {StorageMode::checkpointed, stride};
}

Trajectory::Trajectory(std::size_t levels, std::size_t frame_size, StorageMode mode, std::size_t stride,
                       Stepper stepper)
    : levels_(levels), frame_size_(frame_size), mode_(mode), stride_(mode == StorageMode::checkpointed ? stride : 1),
      stepper_(std::move(stepper)) {
    if (mode_ == StorageMode::checkpointed && stride_ < 2)
        throw std::invalid_argument("checkpoint stride must be at least 2");
    std::size_t slots = levels_;
    if (mode_ == StorageMode::final_only) slots = 2;
    if (mode_ == StorageMode::checkpointed) slots = (levels_ - 1) / stride_ + 1;
    y_store_.assign(slots * frame_size_, 0.0);
    yt_store_.assign(slots * frame_size_, 0.0);
}

bool Trajectory::has(std::size_t k) const noexcept {
    if (k >= levels_) return false;
    if (mode_ == StorageMode::final_only) return k == 0 || k + 1 == levels_;
    return true;
}

void Trajectory::record(std::size_t k, std::span<const double> y, std::span<const double> yt) {
    std::size_t slot = 0;
    switch (mode_) {
        case StorageMode::full:
        case StorageMode::automatic: slot = k; break;
        case StorageMode::final_only:
            if (k != 0 && k + 1 != levels_) return;
            slot = k == 0 ? 0 : 1;
            break;
        case StorageMode::checkpointed:
            if (k % stride_ != 0) return;
            slot = k / stride_;
            break;
    }
    std::copy(y.begin(), y.end(), y_store_.begin() + static_cast<std::ptrdiff_t>(slot * frame_size_));
    std::copy(yt.begin(), yt.end(), yt_store_.begin() + static_cast<std::ptrdiff_t>(slot * frame_size_));
}

void Trajectory::load_segment(std::size_t start) const {
    if (segment_start_ == start) return;
    const std::size_t count = std::min(stride_, levels_ - start);
    y_segment_.resize(count * frame_size_);
    yt_segment_.resize(count * frame_size_);
    const std::size_t slot = start / stride_;
    std::copy_n(frame(y_store_, slot), frame_size_, y_segment_.begin());
    std::copy_n(frame(yt_store_, slot), frame_size_, yt_segment_.begin());
    for (std::size_t m = 1; m < count; ++m) {
        const auto prev = (m - 1) * frame_size_;
        const auto next = m * frame_size_;
        stepper_(start + m - 1, {y_segment_.data() + prev, frame_size_}, {yt_segment_.data() + prev, frame_size_},
                 {y_segment_.data() + next, frame_size_}, {yt_segment_.data() + next, frame_size_});
    }
    segment_start_ = start;
}

std::span<const double> Trajectory::y(std::size_t k) const {
    if (!has(k)) throw std::out_of_range("trajectory frame " + std::to_string(k) + " is not available");
    switch (mode_) {
        case StorageMode::final_only: return {frame(y_store_, k == 0 ? 0 : 1), frame_size_};
        case StorageMode::checkpointed: {
            if (k % stride_ == 0) return {frame(y_store_, k / stride_), frame_size_};
            const std::size_t start = k - k % stride_;
            load_segment(start);
            return {y_segment_.data() + (k - start) * frame_size_, frame_size_};
        }
        default: return {frame(y_store_, k), frame_size_};
    }
}

std::span<const double> Trajectory::ytilde(std::size_t k) const {
    if (!has(k)) throw std::out_of_range("trajectory frame " + std::to_string(k) + " is not available");
    switch (mode_) {
        case StorageMode::final_only: return {frame(yt_store_, k == 0 ? 0 : 1), frame_size_};
        case StorageMode::checkpointed: {
            if (k % stride_ == 0) return {frame(yt_store_, k / stride_), frame_size_};
            const std::size_t start = k - k % stride_;
            load_segment(start);
            return {yt_segment_.data() + (k - start) * frame_size_, frame_size_};
        }
        default: return {frame(yt_store_, k), frame_size_};
    }
}

}  // namespace pfc
