#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracsource {

/// Order alpha of the Caputo derivative, 0 < alpha < 1.
class FractionalOrder {
public:
    explicit FractionalOrder(double alpha);
    double value() const noexcept { return alpha_; }
    operator double() const noexcept { return alpha_; }

private:
    double alpha_;
};

/// Uniform partition t_k = k T / n_steps of [0, T], n_steps >= 2.
class TimeGrid {
public:
    TimeGrid(double final_time, std::size_t n_steps);

    double final_time() const noexcept { return final_time_; }
    std::size_t n_steps() const noexcept { return n_steps_; }
    std::size_t size() const noexcept { return n_steps_ + 1; }
    double step() const noexcept { return final_time_ / static_cast<double>(n_steps_); }
    double node(std::size_t k) const;
    std::vector<double> nodes() const;

    bool operator==(const TimeGrid&) const = default;

private:
    double final_time_;
    std::size_t n_steps_;
};

/// Real values sampled at every node of a TimeGrid.
class TimeSeries {
public:
    TimeSeries(TimeGrid grid, std::vector<double> values);

    static TimeSeries zeros(const TimeGrid& grid);
    static TimeSeries constant(const TimeGrid& grid, double value);
    static TimeSeries sample(const TimeGrid& grid, const std::function<double(double)>& f);

    const TimeGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }
    double& operator[](std::size_t k) { return values_[k]; }

    /// t -> f(T - t), exact on the nodes.
    TimeSeries reversed() const;

    double max_abs() const;
    /// Trapezoidal L^2(0, T) norm.
    double l2_norm() const;
    /// Trapezoidal L^1(0, T) norm.
    double l1_norm() const;

    TimeSeries& operator+=(const TimeSeries& other);
    TimeSeries& operator-=(const TimeSeries& other);
    TimeSeries& operator*=(double s);

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

TimeSeries operator+(TimeSeries a, const TimeSeries& b);
TimeSeries operator-(TimeSeries a, const TimeSeries& b);
TimeSeries operator*(double s, TimeSeries f);

/// ||a - b||_{L^2} / ||b||_{L^2} (trapezoidal).
double relative_l2_error(const TimeSeries& approx, const TimeSeries& exact);

}  // namespace fracsource
