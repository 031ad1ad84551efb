#pragma once

#include <chrono>
#include <thread>

namespace lanwave {

// Monotonic time source in seconds. Transmissions schedule against absolute
// deadlines computed from the stream start, never accumulated sleeps.
class Clock {
public:
    virtual ~Clock() = default;
    virtual double now() = 0;
    virtual void sleep_until(double t) = 0;

    void sleep_for(double dt) { sleep_until(now() + dt); }
};

// Wall-clock steady time, epoch at construction.
class SteadyClock final : public Clock {
public:
    SteadyClock() : epoch_(std::chrono::steady_clock::now()) {}

    double now() override
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_).count();
    }

    void sleep_until(double t) override
    {
        const auto deadline = epoch_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                           std::chrono::duration<double>(t));
        std::this_thread::sleep_until(deadline);
    }

private:
    std::chrono::steady_clock::time_point epoch_;
};

// Virtual time that advances instantly on sleep. Drives simulations and tests.
class SimulatedClock final : public Clock {
public:
    double now() override { return t_; }

    void sleep_until(double t) override
    {
        if (t > t_) {
            t_ = t;
        }
    }

private:
    double t_ = 0.0;
};

}  // namespace lanwave
